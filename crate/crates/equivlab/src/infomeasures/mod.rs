//! Exact probability and information measures on finite alphabets.
//!
//! [`JointDist`] is a dense joint probability table over named variables and
//! the carrier for every region formula in this crate: p(x,y), p(x,y,v,u),
//! p(x,y,w,z,v1,v2,u). [`CondChannel`] is a conditional distribution used to
//! grow a joint by one factorization step at a time.
//!
//! All entropies and informations are in bits (log base 2), with the usual
//! 0·log 0 = 0 convention. Probabilities are kept in linear space; the
//! alphabets here are tiny, so log-space storage buys nothing.
//!
//! Variable order inside a [`JointDist`] is canonicalized alphabetically at
//! construction, so marginals of equal distributions are comparable bitwise.

mod binary;
mod text;

pub use binary::{binary_convolution, binary_entropy, inv_binary_entropy};

use crate::error::{Error, Result};

/// Default tolerance for normalization checks.
pub const NORM_TOL: f64 = 1e-9;

/// Symbolic variable names. Declaration order is alphabetical, which makes
/// the derived `Ord` the canonical table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    E,
    N,
    U,
    V,
    V1,
    V2,
    W,
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 10] = [
        Var::E,
        Var::N,
        Var::U,
        Var::V,
        Var::V1,
        Var::V2,
        Var::W,
        Var::X,
        Var::Y,
        Var::Z,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Var::E => "E",
            Var::N => "N",
            Var::U => "U",
            Var::V => "V",
            Var::V1 => "V1",
            Var::V2 => "V2",
            Var::W => "W",
            Var::X => "X",
            Var::Y => "Y",
            Var::Z => "Z",
        }
    }

    pub fn parse(s: &str) -> Result<Var> {
        Var::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::parse(format!("unknown variable name `{s}`")))
    }
}

impl std::fmt::Display for Var {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A named variable together with its alphabet size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarId {
    pub var: Var,
    pub card: usize,
}

impl VarId {
    pub fn new(var: Var, card: usize) -> VarId {
        VarId { var, card }
    }
}

/// Dense joint probability table over a tuple of finite variables.
///
/// Entries are nonnegative and sum to one within [`NORM_TOL`]; the table is
/// row-major in the canonical (alphabetical) variable order.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    vars: Vec<VarId>,
    probs: Vec<f64>,
}

impl JointDist {
    /// Build a joint distribution; `probs` is row-major in the order `vars`
    /// is given, and is re-laid-out into canonical order.
    pub fn new(vars: Vec<VarId>, probs: Vec<f64>) -> Result<JointDist> {
        if vars.is_empty() {
            return Err(Error::input("a JointDist needs at least one variable"));
        }
        for id in &vars {
            if id.card == 0 {
                return Err(Error::input(format!("variable {} has cardinality 0", id.var)));
            }
        }
        for (i, a) in vars.iter().enumerate() {
            if vars[i + 1..].iter().any(|b| b.var == a.var) {
                return Err(Error::input(format!("duplicate variable {}", a.var)));
            }
        }
        let len: usize = vars.iter().map(|v| v.card).product();
        if probs.len() != len {
            return Err(Error::input(format!(
                "table has {} entries but the product of cardinalities is {len}",
                probs.len()
            )));
        }
        let mut sum = 0.0;
        for &p in &probs {
            if p < 0.0 || p.is_nan() {
                return Err(Error::input(format!("negative or NaN probability {p}")));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::input(format!("table sums to {sum}, expected 1")));
        }

        // Canonicalize: sort variables alphabetically, permute the table.
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by_key(|&i| vars[i].var);
        if order.windows(2).all(|w| w[0] < w[1]) {
            return Ok(JointDist { vars, probs });
        }
        let sorted: Vec<VarId> = order.iter().map(|&i| vars[i]).collect();
        let given_strides = strides(&vars);
        let mut out = vec![0.0; len];
        let sorted_cards: Vec<usize> = sorted.iter().map(|v| v.card).collect();
        let mut idx = vec![0usize; sorted.len()];
        for slot in out.iter_mut() {
            let mut given_flat = 0;
            for (pos, &i) in order.iter().enumerate() {
                given_flat += idx[pos] * given_strides[i];
            }
            *slot = probs[given_flat];
            advance(&mut idx, &sorted_cards);
        }
        Ok(JointDist {
            vars: sorted,
            probs: out,
        })
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn card_of(&self, var: Var) -> Option<usize> {
        self.vars.iter().find(|v| v.var == var).map(|v| v.card)
    }

    fn positions(&self, subset: &[Var]) -> Result<Vec<usize>> {
        let mut pos = Vec::with_capacity(subset.len());
        for &v in subset {
            let p = self
                .vars
                .iter()
                .position(|id| id.var == v)
                .ok_or_else(|| Error::input(format!("variable {v} not in distribution")))?;
            if !pos.contains(&p) {
                pos.push(p);
            }
        }
        pos.sort_unstable();
        Ok(pos)
    }

    /// Marginal probability table over `subset` (canonical order), as a flat
    /// vector. Accumulation walks the full table in row-major order, so equal
    /// joints produce bitwise-equal marginals.
    fn marginal_table(&self, positions: &[usize]) -> Vec<f64> {
        let cards: Vec<usize> = self.vars.iter().map(|v| v.card).collect();
        let out_len: usize = positions.iter().map(|&p| cards[p]).product();
        let mut out = vec![0.0; out_len];
        let mut idx = vec![0usize; cards.len()];
        for &p in &self.probs {
            let mut flat = 0;
            for &pos in positions {
                flat = flat * cards[pos] + idx[pos];
            }
            out[flat] += p;
            advance(&mut idx, &cards);
        }
        out
    }

    /// Shannon entropy in bits of the marginal on `subset`.
    pub fn entropy(&self, subset: &[Var]) -> Result<f64> {
        let pos = self.positions(subset)?;
        if pos.is_empty() {
            return Err(Error::input("entropy of the empty set is not defined"));
        }
        Ok(entropy_of(&self.marginal_table(&pos)))
    }

    /// Conditional entropy H(a | b) = H(a ∪ b) − H(b) in bits.
    ///
    /// Overlapping sets are allowed and follow the union formula, so
    /// H(X | X) = 0.
    pub fn cond_entropy(&self, a: &[Var], b: &[Var]) -> Result<f64> {
        let ab = union(a, b);
        if b.is_empty() {
            return self.entropy(a);
        }
        Ok(self.entropy(&ab)? - self.entropy(b)?)
    }

    /// Mutual information I(a ; b) = H(a) + H(b) − H(a ∪ b), clamped at 0.
    pub fn mutual_info(&self, a: &[Var], b: &[Var]) -> Result<f64> {
        let v = self.entropy(a)? + self.entropy(b)? - self.entropy(&union(a, b))?;
        Ok(v.max(0.0))
    }

    /// Conditional mutual information I(a ; b | c) = H(a|c) − H(a|b,c),
    /// clamped at 0.
    pub fn cond_mutual_info(&self, a: &[Var], b: &[Var], c: &[Var]) -> Result<f64> {
        if c.is_empty() {
            return self.mutual_info(a, b);
        }
        let v = self.cond_entropy(a, c)? - self.cond_entropy(a, &union(b, c))?;
        Ok(v.max(0.0))
    }

    /// Test the Markov chain a → b → c: true iff I(a ; c | b) ≤ tol.
    pub fn is_markov(&self, a: &[Var], b: &[Var], c: &[Var], tol: f64) -> Result<bool> {
        Ok(self.cond_mutual_info(a, c, b)? <= tol)
    }

    /// Grow the joint by one conditional factor: the result ranges over
    /// `self.vars ∪ ch.outputs` with p(all) = p(self) · ch(outputs | inputs).
    /// The outputs are conditionally independent of everything but the
    /// channel inputs, by construction.
    pub fn extend(&self, ch: &CondChannel) -> Result<JointDist> {
        for inp in &ch.inputs {
            match self.card_of(inp.var) {
                None => {
                    return Err(Error::input(format!(
                        "channel input {} not in distribution",
                        inp.var
                    )))
                }
                Some(c) if c != inp.card => {
                    return Err(Error::input(format!(
                        "dimension mismatch for {}: distribution has {}, channel expects {}",
                        inp.var, c, inp.card
                    )))
                }
                _ => {}
            }
        }
        for out in &ch.outputs {
            if self.card_of(out.var).is_some() {
                return Err(Error::input(format!(
                    "variable collision: {} already in distribution",
                    out.var
                )));
            }
        }

        let mut new_vars = self.vars.clone();
        new_vars.extend(ch.outputs.iter().copied());
        new_vars.sort_by_key(|v| v.var);
        let new_cards: Vec<usize> = new_vars.iter().map(|v| v.card).collect();
        let len: usize = new_cards.iter().product();

        // Position of every new-layout variable in the base table and in the
        // channel input/output tuples.
        let base_pos: Vec<Option<usize>> = new_vars
            .iter()
            .map(|v| self.vars.iter().position(|b| b.var == v.var))
            .collect();
        let in_pos: Vec<Option<usize>> = new_vars
            .iter()
            .map(|v| ch.inputs.iter().position(|i| i.var == v.var))
            .collect();
        let out_pos: Vec<Option<usize>> = new_vars
            .iter()
            .map(|v| ch.outputs.iter().position(|o| o.var == v.var))
            .collect();
        let base_strides = strides(&self.vars);
        let in_strides = strides(&ch.inputs);
        let out_strides = strides(&ch.outputs);

        let mut probs = vec![0.0; len];
        let mut idx = vec![0usize; new_vars.len()];
        for slot in probs.iter_mut() {
            let mut b = 0;
            let mut i = 0;
            let mut o = 0;
            for (k, &val) in idx.iter().enumerate() {
                if let Some(p) = base_pos[k] {
                    b += val * base_strides[p];
                }
                if let Some(p) = in_pos[k] {
                    i += val * in_strides[p];
                }
                if let Some(p) = out_pos[k] {
                    o += val * out_strides[p];
                }
            }
            *slot = self.probs[b] * ch.rows[i * ch.out_len + o];
            advance(&mut idx, &new_cards);
        }
        Ok(JointDist {
            vars: new_vars,
            probs,
        })
    }

    /// Sum out everything not in `keep`.
    pub fn marginalize(&self, keep: &[Var]) -> Result<JointDist> {
        if keep.is_empty() {
            return Err(Error::input("marginalize needs a nonempty keep set"));
        }
        let pos = self.positions(keep)?;
        let vars: Vec<VarId> = pos.iter().map(|&p| self.vars[p]).collect();
        let probs = self.marginal_table(&pos);
        Ok(JointDist { vars, probs })
    }
}

/// Conditional distribution p(outputs | inputs): one probability row over the
/// output tuple for every input tuple. Rows are stored flat, row-major, with
/// the input tuple ordered as `inputs` and the output tuple as `outputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondChannel {
    inputs: Vec<VarId>,
    outputs: Vec<VarId>,
    rows: Vec<f64>,
    in_len: usize,
    out_len: usize,
}

impl CondChannel {
    pub fn new(inputs: Vec<VarId>, outputs: Vec<VarId>, rows: Vec<f64>) -> Result<CondChannel> {
        if outputs.is_empty() {
            return Err(Error::input("a channel needs at least one output"));
        }
        let mut all = inputs.clone();
        all.extend(outputs.iter().copied());
        for (i, a) in all.iter().enumerate() {
            if a.card == 0 {
                return Err(Error::input(format!("variable {} has cardinality 0", a.var)));
            }
            if all[i + 1..].iter().any(|b| b.var == a.var) {
                return Err(Error::input(format!("duplicate variable {}", a.var)));
            }
        }
        let in_len: usize = inputs.iter().map(|v| v.card).product();
        let out_len: usize = outputs.iter().map(|v| v.card).product();
        if rows.len() != in_len * out_len {
            return Err(Error::input(format!(
                "channel table has {} entries, expected {}",
                rows.len(),
                in_len * out_len
            )));
        }
        for r in 0..in_len {
            let mut sum = 0.0;
            for &p in &rows[r * out_len..(r + 1) * out_len] {
                if p < 0.0 || p.is_nan() {
                    return Err(Error::input(format!("negative or NaN probability {p}")));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > NORM_TOL {
                return Err(Error::input(format!("row {r} sums to {sum}, expected 1")));
            }
        }
        Ok(CondChannel {
            inputs,
            outputs,
            rows,
            in_len,
            out_len,
        })
    }

    pub fn inputs(&self) -> &[VarId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[VarId] {
        &self.outputs
    }

    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.in_len
    }

    pub fn row_len(&self) -> usize {
        self.out_len
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.rows[r * self.out_len..(r + 1) * self.out_len]
    }

    /// Replace row `r`; the new row must be a distribution.
    pub fn set_row(&mut self, r: usize, row: &[f64]) -> Result<()> {
        if row.len() != self.out_len {
            return Err(Error::input("row length mismatch"));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL || row.iter().any(|&p| p < 0.0 || p.is_nan()) {
            return Err(Error::input("row is not a probability distribution"));
        }
        self.rows[r * self.out_len..(r + 1) * self.out_len].copy_from_slice(row);
        Ok(())
    }

    /// Deterministic channel: output tuple index = f(input tuple index).
    pub fn deterministic(
        inputs: Vec<VarId>,
        outputs: Vec<VarId>,
        f: impl Fn(usize) -> usize,
    ) -> Result<CondChannel> {
        let in_len: usize = inputs.iter().map(|v| v.card).product();
        let out_len: usize = outputs.iter().map(|v| v.card).product();
        let mut rows = vec![0.0; in_len * out_len];
        for r in 0..in_len {
            let o = f(r);
            if o >= out_len {
                return Err(Error::input(format!(
                    "deterministic map sends row {r} to {o}, outside 0..{out_len}"
                )));
            }
            rows[r * out_len + o] = 1.0;
        }
        CondChannel::new(inputs, outputs, rows)
    }

    /// Constant channel: every input maps to the same `point` output.
    pub fn constant(inputs: Vec<VarId>, output: VarId, point: usize) -> Result<CondChannel> {
        if point >= output.card {
            return Err(Error::input("point outside the output alphabet"));
        }
        CondChannel::deterministic(inputs, vec![output], |_| point)
    }

    /// Identity channel copying a binary-or-larger input to an output of the
    /// same cardinality.
    pub fn identity(input: VarId, output: Var) -> Result<CondChannel> {
        CondChannel::deterministic(vec![input], vec![VarId::new(output, input.card)], |r| r)
    }

    /// Binary symmetric channel with crossover `alpha` from a binary input to
    /// a binary output.
    pub fn bsc(input: Var, output: Var, alpha: f64) -> Result<CondChannel> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::input(format!("crossover {alpha} outside [0, 1]")));
        }
        CondChannel::new(
            vec![VarId::new(input, 2)],
            vec![VarId::new(output, 2)],
            vec![1.0 - alpha, alpha, alpha, 1.0 - alpha],
        )
    }
}

fn union(a: &[Var], b: &[Var]) -> Vec<Var> {
    let mut u = a.to_vec();
    for &v in b {
        if !u.contains(&v) {
            u.push(v);
        }
    }
    u
}

fn strides(vars: &[VarId]) -> Vec<usize> {
    let mut s = vec![1usize; vars.len()];
    for i in (0..vars.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * vars[i + 1].card;
    }
    s
}

fn advance(idx: &mut [usize], cards: &[usize]) {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < cards[i] {
            return;
        }
        idx[i] = 0;
    }
}

fn entropy_of(table: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in table {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}
