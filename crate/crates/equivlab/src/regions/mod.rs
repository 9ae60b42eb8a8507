//! Rate-equivocation regions for the three helper models.
//!
//! Each region is a set of achievable rate/equivocation tuples parameterized
//! by auxiliary channels with bounded cardinalities:
//!
//! - one-sided helper: R_x ≥ H(X|V), R_y ≥ I(Y;V), Δ ≤ I(X;V), over
//!   p(x,y,v) = p(x,y) p(v|y) with |V| ≤ |Y|+2;
//! - two-sided helper: same rates, Δ ≤ min(I(X;V|U), R_y), over
//!   p(x,y,v,u) = p(x,y) p(v|y) p(u|x,v) with |U| ≤ |X||Y|+2|X|;
//! - secure/insecure links with side information W at Bob and Z at Eve:
//!   R_x ≥ H(X|V1,V2,W), R_sec ≥ I(Y;V1|W), R_ins ≥ I(Y;V2|W,V1),
//!   Δ ≤ min(R_sec, I(X;V1|U,V2,W)) + I(X;W|U,V2) − I(X;Z|U,V2), over
//!   p(x,y) p(w,z|x) p(v1,v2|y) p(u|x,v1,v2).
//!
//! [`eval_theorem1`]/[`eval_theorem2`]/[`eval_theorem3`] evaluate one
//! operating point for explicit channels; the [`optimize`] submodule searches
//! the channels for the largest equivocation under rate budgets, and
//! [`sweep()`] traces boundary curves over a budget grid.

pub mod optimize;
pub mod sweep;

pub use optimize::{
    optimize_theorem1, optimize_theorem2, optimize_theorem3, OptimizeOpts, Optimized,
};
pub use sweep::{sweep, write_sweep_csv, SweepOpts, SweepSource};

use crate::error::{Error, Result};
use crate::infomeasures::{CondChannel, JointDist, Var, VarId};

/// Tolerance for the Markov-chain validation of [`SecInsSource`].
pub const MARKOV_TOL: f64 = 1e-10;

/// Feasibility slack for operating rates handed to the evaluators.
pub const RATE_TOL: f64 = 1e-9;

/// Which helper model a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    OneSided,
    TwoSided,
    SecIns,
}

impl Model {
    pub fn tag(self) -> &'static str {
        match self {
            Model::OneSided => "one",
            Model::TwoSided => "two",
            Model::SecIns => "secins",
        }
    }

    pub fn parse(s: &str) -> Result<Model> {
        match s {
            "one" => Ok(Model::OneSided),
            "two" => Ok(Model::TwoSided),
            "secins" => Ok(Model::SecIns),
            other => Err(Error::parse(format!(
                "unknown model `{other}` (expected one|two|secins)"
            ))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// An i.i.d. source pair (X, Y).
#[derive(Debug, Clone, PartialEq)]
pub struct SourcePair {
    joint: JointDist,
}

impl SourcePair {
    pub fn new(joint: JointDist) -> Result<SourcePair> {
        let vars: Vec<Var> = joint.vars().iter().map(|v| v.var).collect();
        if vars != [Var::X, Var::Y] {
            return Err(Error::input(
                "a SourcePair must range over exactly the variables X and Y",
            ));
        }
        Ok(SourcePair { joint })
    }

    /// Doubly symmetric binary source: X, Y uniform bits with
    /// X = Y ⊕ Ber(delta).
    pub fn binary_symmetric(delta: f64) -> Result<SourcePair> {
        if !(0.0..=0.5).contains(&delta) {
            return Err(Error::input(format!("crossover {delta} outside [0, 1/2]")));
        }
        SourcePair::new(JointDist::new(
            vec![VarId::new(Var::X, 2), VarId::new(Var::Y, 2)],
            vec![
                (1.0 - delta) / 2.0,
                delta / 2.0,
                delta / 2.0,
                (1.0 - delta) / 2.0,
            ],
        )?)
    }

    pub fn joint(&self) -> &JointDist {
        &self.joint
    }

    pub fn x_card(&self) -> usize {
        self.joint.card_of(Var::X).unwrap()
    }

    pub fn y_card(&self) -> usize {
        self.joint.card_of(Var::Y).unwrap()
    }
}

/// Source for the secure/insecure-links model: (X, Y, W, Z) with
/// p(x,y,w,z) = p(x,y) p(w,z|x), i.e. Y → X → (W,Z) is a Markov chain.
#[derive(Debug, Clone, PartialEq)]
pub struct SecInsSource {
    joint: JointDist,
}

impl SecInsSource {
    pub fn new(joint: JointDist) -> Result<SecInsSource> {
        let vars: Vec<Var> = joint.vars().iter().map(|v| v.var).collect();
        if vars != [Var::W, Var::X, Var::Y, Var::Z] {
            return Err(Error::input(
                "a SecInsSource must range over exactly the variables X, Y, W, Z",
            ));
        }
        let leak = joint.cond_mutual_info(&[Var::Y], &[Var::W, Var::Z], &[Var::X])?;
        if leak > MARKOV_TOL {
            return Err(Error::input(format!(
                "source violates the Markov chain Y → X → (W,Z): I(Y;(W,Z)|X) = {leak:.3e}"
            )));
        }
        Ok(SecInsSource { joint })
    }

    /// Build from a pair source and a side-information channel p(w,z|x);
    /// the Markov chain holds by construction.
    pub fn from_pair(pair: &SourcePair, wz_channel: &CondChannel) -> Result<SecInsSource> {
        let outs: Vec<Var> = wz_channel.outputs().iter().map(|v| v.var).collect();
        if !(outs == [Var::W, Var::Z] || outs == [Var::Z, Var::W]) {
            return Err(Error::input(
                "side-information channel must output exactly W and Z",
            ));
        }
        SecInsSource::new(pair.joint().extend(wz_channel)?)
    }

    /// Degenerate side information: W and Z both constant.
    pub fn without_side_information(pair: &SourcePair) -> Result<SecInsSource> {
        let ch = CondChannel::deterministic(
            vec![VarId::new(Var::X, pair.x_card())],
            vec![VarId::new(Var::W, 1), VarId::new(Var::Z, 1)],
            |_| 0,
        )?;
        SecInsSource::from_pair(pair, &ch)
    }

    pub fn joint(&self) -> &JointDist {
        &self.joint
    }

    pub fn x_card(&self) -> usize {
        self.joint.card_of(Var::X).unwrap()
    }

    pub fn y_card(&self) -> usize {
        self.joint.card_of(Var::Y).unwrap()
    }
}

fn input_vars(ch: &CondChannel) -> Vec<Var> {
    let mut v: Vec<Var> = ch.inputs().iter().map(|i| i.var).collect();
    v.sort_unstable();
    v
}

fn output_vars(ch: &CondChannel) -> Vec<Var> {
    let mut v: Vec<Var> = ch.outputs().iter().map(|o| o.var).collect();
    v.sort_unstable();
    v
}

fn card_in(ch: &CondChannel, var: Var) -> usize {
    ch.inputs()
        .iter()
        .chain(ch.outputs())
        .find(|id| id.var == var)
        .map(|id| id.card)
        .unwrap_or(0)
}

/// One-sided helper auxiliary: a channel p(v|y) with |V| ≤ |Y|+2.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxSystem1 {
    v_channel: CondChannel,
}

impl AuxSystem1 {
    pub fn new(v_channel: CondChannel) -> Result<AuxSystem1> {
        if input_vars(&v_channel) != [Var::Y] || output_vars(&v_channel) != [Var::V] {
            return Err(Error::input("the helper channel must be p(V|Y)"));
        }
        let (y, v) = (card_in(&v_channel, Var::Y), card_in(&v_channel, Var::V));
        if v > y + 2 {
            return Err(Error::input(format!(
                "|V| = {v} exceeds the cardinality bound |Y|+2 = {}",
                y + 2
            )));
        }
        Ok(AuxSystem1 { v_channel })
    }

    pub fn v_channel(&self) -> &CondChannel {
        &self.v_channel
    }
}

/// Two-sided helper auxiliary: p(v|y) and p(u|x,v) with |V| ≤ |Y|+2 and
/// |U| ≤ |X||Y| + 2|X|.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxSystem2 {
    v_channel: CondChannel,
    u_channel: CondChannel,
}

impl AuxSystem2 {
    pub fn new(v_channel: CondChannel, u_channel: CondChannel) -> Result<AuxSystem2> {
        if input_vars(&v_channel) != [Var::Y] || output_vars(&v_channel) != [Var::V] {
            return Err(Error::input("the helper channel must be p(V|Y)"));
        }
        if input_vars(&u_channel) != [Var::V, Var::X] || output_vars(&u_channel) != [Var::U] {
            return Err(Error::input("the quantizer channel must be p(U|X,V)"));
        }
        if card_in(&u_channel, Var::V) != card_in(&v_channel, Var::V) {
            return Err(Error::input("V cardinality differs between the channels"));
        }
        let y = card_in(&v_channel, Var::Y);
        let v = card_in(&v_channel, Var::V);
        let x = card_in(&u_channel, Var::X);
        let u = card_in(&u_channel, Var::U);
        if v > y + 2 {
            return Err(Error::input(format!(
                "|V| = {v} exceeds the cardinality bound |Y|+2 = {}",
                y + 2
            )));
        }
        if u > x * y + 2 * x {
            return Err(Error::input(format!(
                "|U| = {u} exceeds the cardinality bound |X||Y|+2|X| = {}",
                x * y + 2 * x
            )));
        }
        Ok(AuxSystem2 {
            v_channel,
            u_channel,
        })
    }

    pub fn v_channel(&self) -> &CondChannel {
        &self.v_channel
    }

    pub fn u_channel(&self) -> &CondChannel {
        &self.u_channel
    }
}

/// Upper bound on |U| for the secure/insecure model.
pub fn theorem3_u_bound(x_card: usize, y_card: usize) -> usize {
    x_card * y_card * y_card + 7 * x_card * y_card + 12 * x_card + 2
}

/// Secure/insecure-links auxiliary: p(v1,v2|y) and p(u|x,v1,v2) with
/// |V1| ≤ |Y|+3, |V2| ≤ |Y|+4 and |U| ≤ |X||Y|² + 7|X||Y| + 12|X| + 2.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxSystem3 {
    v12_channel: CondChannel,
    u_channel: CondChannel,
}

impl AuxSystem3 {
    pub fn new(v12_channel: CondChannel, u_channel: CondChannel) -> Result<AuxSystem3> {
        if input_vars(&v12_channel) != [Var::Y] || output_vars(&v12_channel) != [Var::V1, Var::V2]
        {
            return Err(Error::input("the helper channel must be p(V1,V2|Y)"));
        }
        if input_vars(&u_channel) != [Var::V1, Var::V2, Var::X]
            || output_vars(&u_channel) != [Var::U]
        {
            return Err(Error::input("the quantizer channel must be p(U|X,V1,V2)"));
        }
        for var in [Var::V1, Var::V2] {
            if card_in(&u_channel, var) != card_in(&v12_channel, var) {
                return Err(Error::input(format!(
                    "{var} cardinality differs between the channels"
                )));
            }
        }
        let y = card_in(&v12_channel, Var::Y);
        let v1 = card_in(&v12_channel, Var::V1);
        let v2 = card_in(&v12_channel, Var::V2);
        let x = card_in(&u_channel, Var::X);
        let u = card_in(&u_channel, Var::U);
        if v1 > y + 3 {
            return Err(Error::input(format!(
                "|V1| = {v1} exceeds the cardinality bound |Y|+3 = {}",
                y + 3
            )));
        }
        if v2 > y + 4 {
            return Err(Error::input(format!(
                "|V2| = {v2} exceeds the cardinality bound |Y|+4 = {}",
                y + 4
            )));
        }
        let u_bound = theorem3_u_bound(x, y);
        if u > u_bound {
            return Err(Error::input(format!(
                "|U| = {u} exceeds the cardinality bound {u_bound}"
            )));
        }
        Ok(AuxSystem3 {
            v12_channel,
            u_channel,
        })
    }

    pub fn v12_channel(&self) -> &CondChannel {
        &self.v12_channel
    }

    pub fn u_channel(&self) -> &CondChannel {
        &self.u_channel
    }

    /// Embed a two-sided auxiliary: V1 := V with V2 constant. Evaluated on a
    /// source without side information this reproduces the two-sided region
    /// point exactly. Renaming V to V1 and appending a cardinality-1 V2 at
    /// the end of a tuple leaves every flat row index unchanged, so the
    /// stored tables carry over verbatim.
    pub fn from_two_sided(aux: &AuxSystem2) -> Result<AuxSystem3> {
        let rename = |id: &VarId| match id.var {
            Var::V => VarId::new(Var::V1, id.card),
            other => VarId::new(other, id.card),
        };
        let v = aux.v_channel();
        let mut v_outputs: Vec<VarId> = v.outputs().iter().map(rename).collect();
        v_outputs.push(VarId::new(Var::V2, 1));
        let v12 = CondChannel::new(
            v.inputs().to_vec(),
            v_outputs,
            v.rows().to_vec(),
        )?;
        let u = aux.u_channel();
        let mut u_inputs: Vec<VarId> = u.inputs().iter().map(rename).collect();
        u_inputs.push(VarId::new(Var::V2, 1));
        let u3 = CondChannel::new(u_inputs, u.outputs().to_vec(), u.rows().to_vec())?;
        AuxSystem3::new(v12, u3)
    }
}

/// One evaluated operating point of a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub model: Model,
    /// Minimum rate for Alice, H(X | helper view).
    pub rx_min: f64,
    /// Minimum helper rate: R_y for the one/two-sided models, R_sec for the
    /// secure/insecure model.
    pub ry_min: f64,
    /// Minimum insecure-link rate (secure/insecure model only).
    pub rins_min: Option<f64>,
    /// Equivocation upper bound Δ at this operating point.
    pub delta_cap: f64,
}

/// Evaluate the one-sided region at an explicit helper channel:
/// (H(X|V), I(Y;V), I(X;V)) under p(x,y,v) = p(x,y) p(v|y).
pub fn eval_theorem1(src: &SourcePair, aux: &AuxSystem1) -> Result<RegionPoint> {
    let joint = src.joint().extend(aux.v_channel())?;
    Ok(RegionPoint {
        model: Model::OneSided,
        rx_min: joint.cond_entropy(&[Var::X], &[Var::V])?,
        ry_min: joint.mutual_info(&[Var::Y], &[Var::V])?,
        rins_min: None,
        delta_cap: joint.mutual_info(&[Var::X], &[Var::V])?,
    })
}

/// Evaluate the two-sided region at explicit channels and an operating
/// helper rate: Δ = min(I(X;V|U), R_y). `ry_operating` must be feasible,
/// i.e. at least I(Y;V).
pub fn eval_theorem2(src: &SourcePair, aux: &AuxSystem2, ry_operating: f64) -> Result<RegionPoint> {
    let joint = src
        .joint()
        .extend(aux.v_channel())?
        .extend(aux.u_channel())?;
    let ry_min = joint.mutual_info(&[Var::Y], &[Var::V])?;
    if ry_operating < ry_min - RATE_TOL {
        return Err(Error::Constraint {
            bound: "R_y ≥ I(Y;V)".into(),
            required: ry_min,
            got: ry_operating,
        });
    }
    let i_xv_given_u = joint.cond_mutual_info(&[Var::X], &[Var::V], &[Var::U])?;
    Ok(RegionPoint {
        model: Model::TwoSided,
        rx_min: joint.cond_entropy(&[Var::X], &[Var::V])?,
        ry_min,
        rins_min: None,
        delta_cap: i_xv_given_u.min(ry_operating),
    })
}

/// Evaluate the secure/insecure region at explicit channels and an operating
/// secure-link rate:
/// Δ = max(0, min(R_sec, I(X;V1|U,V2,W)) + I(X;W|U,V2) − I(X;Z|U,V2)).
pub fn eval_theorem3(
    src: &SecInsSource,
    aux: &AuxSystem3,
    rsec_operating: f64,
) -> Result<RegionPoint> {
    let joint = src
        .joint()
        .extend(aux.v12_channel())?
        .extend(aux.u_channel())?;
    let rsec_min = joint.cond_mutual_info(&[Var::Y], &[Var::V1], &[Var::W])?;
    if rsec_operating < rsec_min - RATE_TOL {
        return Err(Error::Constraint {
            bound: "R_sec ≥ I(Y;V1|W)".into(),
            required: rsec_min,
            got: rsec_operating,
        });
    }
    let rins_min = joint.cond_mutual_info(&[Var::Y], &[Var::V2], &[Var::W, Var::V1])?;
    let secure_part = joint
        .cond_mutual_info(&[Var::X], &[Var::V1], &[Var::U, Var::V2, Var::W])?
        .min(rsec_operating);
    let gain = joint.cond_mutual_info(&[Var::X], &[Var::W], &[Var::U, Var::V2])?;
    let loss = joint.cond_mutual_info(&[Var::X], &[Var::Z], &[Var::U, Var::V2])?;
    Ok(RegionPoint {
        model: Model::SecIns,
        rx_min: joint.cond_entropy(&[Var::X], &[Var::V1, Var::V2, Var::W])?,
        ry_min: rsec_min,
        rins_min: Some(rins_min),
        // Equivocation is nonnegative by definition; U := X always attains 0.
        delta_cap: (secure_part + gain - loss).max(0.0),
    })
}

#[cfg(test)]
mod tests;
