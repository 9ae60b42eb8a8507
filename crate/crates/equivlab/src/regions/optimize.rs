//! Multi-start local search over auxiliary channels.
//!
//! Each region boundary point is a nonconvex optimization over channel rows
//! on probability simplexes. The search runs many independent work items —
//! deterministic seeds (constant, identity-like, binary-symmetric and
//! one-time-pad constructions, U := X) plus Dirichlet(1) random starts — and
//! refines each by projected coordinate ascent: every pass tries, for every
//! channel row, a move toward each vertex of the simplex and toward the
//! uniform row, with a step that halves when a full pass gains less than the
//! tolerance. Rate budgets enter as an exact penalty during refinement; the
//! surviving candidate is then shrunk toward its pooled row until the rate
//! constraint holds, so the returned certificate is always feasible.
//!
//! Results are inner-bound certificates: every returned auxiliary system
//! re-evaluates, through the corresponding `eval_theorem*`, to exactly the
//! reported point. No global-optimality claim is made; the binary-symmetric
//! closed forms serve as the external correctness oracle.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    eval_theorem1, eval_theorem2, eval_theorem3, theorem3_u_bound, AuxSystem1, AuxSystem2,
    AuxSystem3, RegionPoint, SecInsSource, SourcePair,
};
use crate::error::{Error, Result};
use crate::infomeasures::{inv_binary_entropy, CondChannel, JointDist, Var, VarId};
use crate::rng::stream_rng;
use crate::thread_pool;

/// Exact-penalty weight on rate-budget violations during refinement.
const PENALTY: f64 = 1e3;

/// Candidates within this objective distance of the best are tie-broken.
const TIE_TOL: f64 = 1e-8;

/// A certificate is feasible when its budget overshoot is below this.
const FEAS_TOL: f64 = 1e-12;

/// Search options shared by the three optimizers.
#[derive(Debug, Clone)]
pub struct OptimizeOpts {
    /// Number of Dirichlet(1) random starts (deterministic seeds are extra).
    pub starts: usize,
    /// Master seed; work item i draws its start from stream (seed, i).
    pub seed: u64,
    /// Hard cap on refinement passes per work item.
    pub max_passes: usize,
    /// A full pass gaining less than this halves the step.
    pub gain_tol: f64,
    /// Search cardinality for V (one/two-sided); defaults to the cap |Y|+2.
    pub v_card: Option<usize>,
    /// Search cardinality for U; defaults to the cap |X||Y|+2|X| for the
    /// two-sided model and to min(cap, |X||V1||V2|) for the secure/insecure
    /// model, whose theorem cap is far beyond desk scale.
    pub u_card: Option<usize>,
    /// Search cardinalities for V1, V2 (secure/insecure); default |Y|.
    pub v1_card: Option<usize>,
    pub v2_card: Option<usize>,
}

impl Default for OptimizeOpts {
    fn default() -> Self {
        OptimizeOpts {
            starts: 64,
            seed: 1,
            max_passes: 300,
            gain_tol: 1e-8,
            v_card: None,
            u_card: None,
            v1_card: None,
            v2_card: None,
        }
    }
}

/// Cardinalities the search actually used next to the theorem caps.
/// Enlarging a cardinality can only improve the optimum, so points found
/// under smaller search cards remain valid inner points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchInfo {
    pub cards_used: Vec<(Var, usize)>,
    pub cards_cap: Vec<(Var, usize)>,
}

/// An optimization outcome: the operating point, the auxiliary system that
/// certifies it, and the search cardinalities used.
#[derive(Debug, Clone)]
pub struct Optimized<A> {
    pub point: RegionPoint,
    pub aux: A,
    pub search: SearchInfo,
}

// ---------------------------------------------------------------------------
// Fast repeated evaluation
//
// Refinement scores thousands of candidates that share one structure: a
// fixed source joint extended by one or two channels of fixed shape. The
// plan below precomputes, per cell of the extended joint, the flat index
// into the source table and into each channel's row storage, plus the bin
// index of every marginal we need. One evaluation is then a single fill
// pass and one accumulation pass per marginal.
// ---------------------------------------------------------------------------

struct JointPlan {
    base_val: Vec<f64>,
    ch_idx: Vec<Vec<u32>>,
    marginal_bins: Vec<Vec<u32>>,
    marginal_len: Vec<usize>,
    joint: Vec<f64>,
    scratch: Vec<f64>,
    entropies: Vec<f64>,
}

impl JointPlan {
    fn new(base: &JointDist, chans: &[&CondChannel], marginals: &[&[Var]]) -> JointPlan {
        let mut var_ids: Vec<VarId> = base.vars().to_vec();
        for ch in chans {
            var_ids.extend(ch.outputs().iter().copied());
        }
        var_ids.sort_by_key(|v| v.var);
        let cards: Vec<usize> = var_ids.iter().map(|v| v.card).collect();
        let len: usize = cards.iter().product();

        let pos_of = |var: Var| var_ids.iter().position(|v| v.var == var);
        let strides_of = |ids: &[VarId]| {
            let mut s = vec![1usize; ids.len()];
            for i in (0..ids.len().saturating_sub(1)).rev() {
                s[i] = s[i + 1] * ids[i + 1].card;
            }
            s
        };

        let base_strides = strides_of(base.vars());
        let base_pos: Vec<usize> = base
            .vars()
            .iter()
            .map(|v| pos_of(v.var).expect("base var present"))
            .collect();

        // With outputs last in `all`, the flat index over (inputs, outputs)
        // is row * out_len + col — exactly the channel's row storage.
        struct ChMap {
            positions: Vec<usize>,
            strides: Vec<usize>,
        }
        let ch_maps: Vec<ChMap> = chans
            .iter()
            .map(|ch| {
                let all: Vec<VarId> = ch.inputs().iter().chain(ch.outputs()).copied().collect();
                ChMap {
                    positions: all
                        .iter()
                        .map(|v| pos_of(v.var).expect("channel var present"))
                        .collect(),
                    strides: strides_of(&all),
                }
            })
            .collect();

        let marg_pos: Vec<Vec<usize>> = marginals
            .iter()
            .map(|set| {
                let mut p: Vec<usize> = set
                    .iter()
                    .map(|&v| pos_of(v).expect("marginal var present"))
                    .collect();
                p.sort_unstable();
                p.dedup();
                p
            })
            .collect();
        let marginal_len: Vec<usize> = marg_pos
            .iter()
            .map(|p| p.iter().map(|&i| cards[i]).product())
            .collect();

        let mut base_val = vec![0.0; len];
        let mut ch_idx = vec![vec![0u32; len]; chans.len()];
        let mut marginal_bins = vec![vec![0u32; len]; marginals.len()];
        let mut idx = vec![0usize; cards.len()];
        for cell in 0..len {
            let mut b = 0;
            for (k, &p) in base_pos.iter().enumerate() {
                b += idx[p] * base_strides[k];
            }
            base_val[cell] = base.probs()[b];
            for (c, map) in ch_maps.iter().enumerate() {
                let mut flat = 0;
                for (k, &p) in map.positions.iter().enumerate() {
                    flat += idx[p] * map.strides[k];
                }
                ch_idx[c][cell] = flat as u32;
            }
            for (m, pos) in marg_pos.iter().enumerate() {
                let mut flat = 0;
                for &p in pos {
                    flat = flat * cards[p] + idx[p];
                }
                marginal_bins[m][cell] = flat as u32;
            }
            for i in (0..idx.len()).rev() {
                idx[i] += 1;
                if idx[i] < cards[i] {
                    break;
                }
                idx[i] = 0;
            }
        }

        let max_marg = marginal_len.iter().copied().max().unwrap_or(0);
        JointPlan {
            base_val,
            ch_idx,
            marginal_bins,
            marginal_len,
            joint: vec![0.0; len],
            scratch: vec![0.0; max_marg],
            entropies: vec![0.0; marginals.len()],
        }
    }

    /// Recompute all planned marginal entropies for the current channel rows.
    fn entropies(&mut self, chans: &[CondChannel]) -> &[f64] {
        match chans.len() {
            1 => {
                let r0 = chans[0].rows();
                for (cell, j) in self.joint.iter_mut().enumerate() {
                    *j = self.base_val[cell] * r0[self.ch_idx[0][cell] as usize];
                }
            }
            2 => {
                let r0 = chans[0].rows();
                let r1 = chans[1].rows();
                for (cell, j) in self.joint.iter_mut().enumerate() {
                    *j = self.base_val[cell]
                        * r0[self.ch_idx[0][cell] as usize]
                        * r1[self.ch_idx[1][cell] as usize];
                }
            }
            _ => unreachable!("plans cover one or two channels"),
        }
        for m in 0..self.marginal_bins.len() {
            let width = self.marginal_len[m];
            let scratch = &mut self.scratch[..width];
            scratch.iter_mut().for_each(|v| *v = 0.0);
            let bins = &self.marginal_bins[m];
            for (cell, &j) in self.joint.iter().enumerate() {
                scratch[bins[cell] as usize] += j;
            }
            let mut h = 0.0;
            for &p in scratch.iter() {
                if p > 0.0 {
                    h -= p * p.log2();
                }
            }
            self.entropies[m] = h;
        }
        &self.entropies
    }
}

// ---------------------------------------------------------------------------
// Refinement and projection
// ---------------------------------------------------------------------------

fn dirichlet_rows(rng: &mut ChaCha8Rng, rows: usize, width: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(rows * width);
    for _ in 0..rows {
        let mut sum = 0.0;
        let base = out.len();
        for _ in 0..width {
            let e = -(1.0 - rng.gen::<f64>()).ln();
            out.push(e);
            sum += e;
        }
        for v in &mut out[base..] {
            *v /= sum;
        }
    }
    out
}

fn mix_row(row: &[f64], target: &[f64], t: f64) -> Vec<f64> {
    row.iter()
        .zip(target)
        .map(|(&r, &g)| (1.0 - t) * r + t * g)
        .collect()
}

/// Coordinate ascent over all rows of all channels: move toward each simplex
/// vertex and toward the uniform row, halving the step whenever a full pass
/// stalls.
fn refine(
    chans: &mut [CondChannel],
    score: &mut dyn FnMut(&[CondChannel]) -> f64,
    opts: &OptimizeOpts,
) {
    let mut current = score(chans);
    let mut step = 0.5f64;
    for _ in 0..opts.max_passes {
        let pass_start = current;
        for c in 0..chans.len() {
            let width = chans[c].row_len();
            if width == 1 {
                continue;
            }
            let uniform = vec![1.0 / width as f64; width];
            let mut target = vec![0.0; width];
            for r in 0..chans[c].num_rows() {
                for dir in 0..=width {
                    let old = chans[c].row(r).to_vec();
                    let goal: &[f64] = if dir == width {
                        &uniform
                    } else {
                        target.iter_mut().for_each(|v| *v = 0.0);
                        target[dir] = 1.0;
                        &target
                    };
                    let cand = mix_row(&old, goal, step);
                    chans[c]
                        .set_row(r, &cand)
                        .expect("convex mix stays on simplex");
                    let s = score(chans);
                    if s > current + 1e-15 {
                        current = s;
                    } else {
                        chans[c].set_row(r, &old).expect("restoring a valid row");
                    }
                }
            }
        }
        if current - pass_start < opts.gain_tol {
            step *= 0.5;
            if step < 1e-7 {
                break;
            }
        }
    }
}

/// Shrink the rate-carrying channel toward its source-pooled row until the
/// budgets hold. Full shrink makes every row equal, which zeroes all helper
/// rates, so a feasible point always exists on the path.
fn project_feasible(
    chans: &mut [CondChannel],
    rate_channel: usize,
    weights: &[f64],
    violation: &mut dyn FnMut(&[CondChannel]) -> f64,
) {
    if violation(chans) <= FEAS_TOL {
        return;
    }
    let ch = &chans[rate_channel];
    let width = ch.row_len();
    let mut pooled = vec![0.0; width];
    for (r, &w) in weights.iter().enumerate().take(ch.num_rows()) {
        for (p, &v) in pooled.iter_mut().zip(ch.row(r)) {
            *p += w * v;
        }
    }
    let total: f64 = pooled.iter().sum();
    pooled.iter_mut().for_each(|p| *p /= total);
    let original: Vec<Vec<f64>> = (0..ch.num_rows()).map(|r| ch.row(r).to_vec()).collect();

    let apply = |chans: &mut [CondChannel], lambda: f64| {
        for (r, row) in original.iter().enumerate() {
            let mixed = mix_row(row, &pooled, lambda);
            chans[rate_channel]
                .set_row(r, &mixed)
                .expect("convex mix stays on simplex");
        }
    };

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        apply(chans, mid);
        if violation(chans) <= FEAS_TOL {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    apply(chans, hi);
}

/// Number of effectively distinct output symbols: symbols of negligible
/// weight are dropped and symbols whose posteriors over the channel input
/// differ by less than 1e-6 in total variation are merged.
fn effective_out_card(ch: &CondChannel, weights: &[f64]) -> usize {
    let width = ch.row_len();
    let mut mass = vec![0.0; width];
    let mut posterior = vec![vec![0.0; ch.num_rows()]; width];
    for r in 0..ch.num_rows() {
        for (o, &p) in ch.row(r).iter().enumerate() {
            mass[o] += weights[r] * p;
            posterior[o][r] = weights[r] * p;
        }
    }
    let mut reps: Vec<Vec<f64>> = Vec::new();
    for o in 0..width {
        if mass[o] <= 1e-12 {
            continue;
        }
        let q: Vec<f64> = posterior[o].iter().map(|&v| v / mass[o]).collect();
        let merged = reps
            .iter()
            .any(|rep| 0.5 * rep.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>() < 1e-6);
        if !merged {
            reps.push(q);
        }
    }
    reps.len()
}

fn source_weights(joint: &JointDist, var: Var) -> Vec<f64> {
    joint
        .marginalize(&[var])
        .expect("source variable present")
        .probs()
        .to_vec()
}

// ---------------------------------------------------------------------------
// Theorem 1
// ---------------------------------------------------------------------------

fn th1_seeds(src: &SourcePair, v_card: usize, budget: f64) -> Vec<CondChannel> {
    let y = VarId::new(Var::Y, src.y_card());
    let v = VarId::new(Var::V, v_card);
    let mut seeds = Vec::new();
    seeds.push(CondChannel::constant(vec![y], v, 0).unwrap());
    seeds.push(CondChannel::deterministic(vec![y], vec![v], |r| r % v_card).unwrap());
    let uniform = vec![1.0 / v_card as f64; v_card];
    seeds.push(CondChannel::new(vec![y], vec![v], uniform.repeat(src.y_card())).unwrap());
    if src.y_card() == 2 && v_card >= 2 {
        // Binary-symmetric construction V = Y ⊕ Ber(α), α = h⁻¹(1 − R_y).
        let alpha = inv_binary_entropy(1.0 - budget.min(1.0)).unwrap();
        let mut rows = vec![0.0; 2 * v_card];
        rows[0] = 1.0 - alpha;
        rows[1] = alpha;
        rows[v_card] = alpha;
        rows[v_card + 1] = 1.0 - alpha;
        seeds.push(CondChannel::new(vec![y], vec![v], rows).unwrap());
    }
    seeds
}

/// Entropy layout for the one-sided score: I(X;V) and I(Y;V).
const TH1_MARGINALS: [&[Var]; 5] = [
    &[Var::X, Var::V],
    &[Var::V],
    &[Var::X],
    &[Var::Y],
    &[Var::Y, Var::V],
];

fn th1_metrics(plan: &mut JointPlan, chans: &[CondChannel]) -> (f64, f64) {
    let h = plan.entropies(chans);
    let i_xv = (h[2] + h[1] - h[0]).max(0.0);
    let i_yv = (h[3] + h[1] - h[4]).max(0.0);
    (i_xv, i_yv)
}

pub(crate) fn optimize_theorem1_with(
    src: &SourcePair,
    ry_budget: f64,
    opts: &OptimizeOpts,
    warm: &[AuxSystem1],
) -> Result<Optimized<AuxSystem1>> {
    if ry_budget < 0.0 {
        return Err(Error::input(format!("negative rate budget {ry_budget}")));
    }
    let v_cap = src.y_card() + 2;
    let v_card = opts.v_card.unwrap_or(v_cap).clamp(1, v_cap);
    let weights = source_weights(src.joint(), Var::Y);

    let mut items: Vec<CondChannel> = warm.iter().map(|a| a.v_channel().clone()).collect();
    items.extend(th1_seeds(src, v_card, ry_budget));
    let fixed = items.len();
    eval_theorem1(src, &AuxSystem1::new(items[fixed - 1].clone())?)?;

    let total = fixed + opts.starts;
    let runs: Vec<(AuxSystem1, RegionPoint, usize)> = thread_pool().install(|| {
        (0..total)
            .into_par_iter()
            .map(|i| {
                let mut chans = vec![if i < fixed {
                    items[i].clone()
                } else {
                    let mut rng = stream_rng(opts.seed, i as u64);
                    CondChannel::new(
                        vec![VarId::new(Var::Y, src.y_card())],
                        vec![VarId::new(Var::V, v_card)],
                        dirichlet_rows(&mut rng, src.y_card(), v_card),
                    )
                    .expect("random rows are a valid channel")
                }];
                let mut plan = JointPlan::new(src.joint(), &[&chans[0]], &TH1_MARGINALS);
                let mut score = |chans: &[CondChannel]| {
                    let (delta, rate) = th1_metrics(&mut plan, chans);
                    delta - PENALTY * (rate - ry_budget).max(0.0)
                };
                refine(&mut chans, &mut score, opts);
                let mut plan2 = JointPlan::new(src.joint(), &[&chans[0]], &TH1_MARGINALS);
                let mut violation = |chans: &[CondChannel]| {
                    let (_, rate) = th1_metrics(&mut plan2, chans);
                    rate - ry_budget
                };
                project_feasible(&mut chans, 0, &weights, &mut violation);
                let eff = effective_out_card(&chans[0], &weights);
                let aux = AuxSystem1::new(chans.pop().unwrap()).expect("search respects the cap");
                let point = eval_theorem1(src, &aux).expect("validated channel");
                (aux, point, eff)
            })
            .collect()
    });

    let best = runs
        .iter()
        .map(|(_, p, _)| p.delta_cap)
        .fold(f64::NEG_INFINITY, f64::max);
    let (aux, point, _) = runs
        .into_iter()
        .enumerate()
        .filter(|(_, (_, p, _))| p.delta_cap >= best - TIE_TOL)
        .min_by(|(ia, (_, _, ea)), (ib, (_, _, eb))| ea.cmp(eb).then(ia.cmp(ib)))
        .map(|(_, run)| run)
        .expect("at least one work item");

    Ok(Optimized {
        point,
        aux,
        search: SearchInfo {
            cards_used: vec![(Var::V, v_card)],
            cards_cap: vec![(Var::V, v_cap)],
        },
    })
}

/// Maximize the one-sided equivocation I(X;V) subject to I(Y;V) ≤ ry_budget.
pub fn optimize_theorem1(
    src: &SourcePair,
    ry_budget: f64,
    opts: &OptimizeOpts,
) -> Result<Optimized<AuxSystem1>> {
    optimize_theorem1_with(src, ry_budget, opts, &[])
}

// ---------------------------------------------------------------------------
// Theorem 2
// ---------------------------------------------------------------------------

/// Deterministic quantizer u = (x + v) mod |X|. With V uniform and
/// independent of the sources this turns the helper output into a
/// one-time-pad key.
fn xor_u_channel(x_card: usize, v_card: usize, u_card: usize) -> CondChannel {
    CondChannel::deterministic(
        vec![VarId::new(Var::X, x_card), VarId::new(Var::V, v_card)],
        vec![VarId::new(Var::U, u_card)],
        move |r| {
            let x = r / v_card;
            let v = r % v_card;
            (x + v) % x_card
        },
    )
    .expect("u_card ≥ x_card")
}

fn th2_seeds(src: &SourcePair, v_card: usize, u_card: usize, budget: f64) -> Vec<[CondChannel; 2]> {
    let x_card = src.x_card();
    let const_u = CondChannel::constant(
        vec![VarId::new(Var::X, x_card), VarId::new(Var::V, v_card)],
        VarId::new(Var::U, u_card),
        0,
    )
    .unwrap();
    let xor_u = xor_u_channel(x_card, v_card, u_card);

    // One-time-pad helper: V uniform over min(|X|, |V|) symbols, independent
    // of Y.
    let k = x_card.min(v_card);
    let mut pad_row = vec![0.0; v_card];
    pad_row[..k].iter_mut().for_each(|p| *p = 1.0 / k as f64);
    let pad = CondChannel::new(
        vec![VarId::new(Var::Y, src.y_card())],
        vec![VarId::new(Var::V, v_card)],
        pad_row.repeat(src.y_card()),
    )
    .unwrap();

    let mut seeds = Vec::new();
    for v_seed in th1_seeds(src, v_card, budget) {
        seeds.push([v_seed.clone(), const_u.clone()]);
        seeds.push([v_seed, xor_u.clone()]);
    }
    seeds.push([pad.clone(), xor_u]);
    seeds.push([pad, const_u]);
    seeds
}

/// Entropy layout for the two-sided score: I(X;V|U) and I(Y;V).
const TH2_MARGINALS: [&[Var]; 8] = [
    &[Var::X, Var::U],
    &[Var::U],
    &[Var::X, Var::U, Var::V],
    &[Var::U, Var::V],
    &[Var::Y],
    &[Var::V],
    &[Var::Y, Var::V],
    &[Var::X, Var::V],
];

fn th2_metrics(plan: &mut JointPlan, chans: &[CondChannel]) -> (f64, f64) {
    let h = plan.entropies(chans);
    let i_xv_given_u = ((h[0] - h[1]) - (h[2] - h[3])).max(0.0);
    let i_yv = (h[4] + h[5] - h[6]).max(0.0);
    (i_xv_given_u, i_yv)
}

pub(crate) fn optimize_theorem2_with(
    src: &SourcePair,
    ry_budget: f64,
    opts: &OptimizeOpts,
    warm: &[AuxSystem2],
) -> Result<Optimized<AuxSystem2>> {
    if ry_budget < 0.0 {
        return Err(Error::input(format!("negative rate budget {ry_budget}")));
    }
    let x_card = src.x_card();
    let y_card = src.y_card();
    let v_cap = y_card + 2;
    let u_cap = x_card * y_card + 2 * x_card;
    let v_card = opts.v_card.unwrap_or(v_cap).clamp(1, v_cap);
    let u_card = opts.u_card.unwrap_or(u_cap).clamp(x_card, u_cap);
    let weights = source_weights(src.joint(), Var::Y);

    let mut items: Vec<[CondChannel; 2]> = warm
        .iter()
        .map(|a| [a.v_channel().clone(), a.u_channel().clone()])
        .collect();
    items.extend(th2_seeds(src, v_card, u_card, ry_budget));
    let fixed = items.len();
    {
        let [v, u] = items[fixed - 1].clone();
        eval_theorem2(src, &AuxSystem2::new(v, u)?, f64::INFINITY)?;
    }

    let total = fixed + opts.starts;
    let runs: Vec<(AuxSystem2, RegionPoint, usize)> = thread_pool().install(|| {
        (0..total)
            .into_par_iter()
            .map(|i| {
                let mut chans: Vec<CondChannel> = if i < fixed {
                    items[i].to_vec()
                } else {
                    let mut rng = stream_rng(opts.seed, i as u64);
                    let v_rows = dirichlet_rows(&mut rng, y_card, v_card);
                    let u_rows = dirichlet_rows(&mut rng, x_card * v_card, u_card);
                    vec![
                        CondChannel::new(
                            vec![VarId::new(Var::Y, y_card)],
                            vec![VarId::new(Var::V, v_card)],
                            v_rows,
                        )
                        .expect("random rows are a valid channel"),
                        CondChannel::new(
                            vec![VarId::new(Var::X, x_card), VarId::new(Var::V, v_card)],
                            vec![VarId::new(Var::U, u_card)],
                            u_rows,
                        )
                        .expect("random rows are a valid channel"),
                    ]
                };
                let mut plan =
                    JointPlan::new(src.joint(), &[&chans[0], &chans[1]], &TH2_MARGINALS);
                let mut score = |chans: &[CondChannel]| {
                    let (secret, rate) = th2_metrics(&mut plan, chans);
                    secret.min(ry_budget) - PENALTY * (rate - ry_budget).max(0.0)
                };
                refine(&mut chans, &mut score, opts);
                let mut plan2 =
                    JointPlan::new(src.joint(), &[&chans[0], &chans[1]], &TH2_MARGINALS);
                let mut violation = |chans: &[CondChannel]| {
                    let (_, rate) = th2_metrics(&mut plan2, chans);
                    rate - ry_budget
                };
                project_feasible(&mut chans, 0, &weights, &mut violation);
                let eff = effective_out_card(&chans[0], &weights);
                let u = chans.pop().unwrap();
                let v = chans.pop().unwrap();
                let aux = AuxSystem2::new(v, u).expect("search respects the caps");
                let point = eval_theorem2(src, &aux, ry_budget).expect("projected feasible");
                (aux, point, eff)
            })
            .collect()
    });

    let best = runs
        .iter()
        .map(|(_, p, _)| p.delta_cap)
        .fold(f64::NEG_INFINITY, f64::max);
    // Among near-optimal candidates report the one of minimal H(X|V), then
    // smallest effective |V|, then lowest work-item index.
    let (aux, point, _) = runs
        .into_iter()
        .enumerate()
        .filter(|(_, (_, p, _))| p.delta_cap >= best - TIE_TOL)
        .min_by(|(ia, (_, pa, ea)), (ib, (_, pb, eb))| {
            pa.rx_min
                .total_cmp(&pb.rx_min)
                .then(ea.cmp(eb))
                .then(ia.cmp(ib))
        })
        .map(|(_, run)| run)
        .expect("at least one work item");

    Ok(Optimized {
        point,
        aux,
        search: SearchInfo {
            cards_used: vec![(Var::V, v_card), (Var::U, u_card)],
            cards_cap: vec![(Var::V, v_cap), (Var::U, u_cap)],
        },
    })
}

/// Maximize the two-sided equivocation min(I(X;V|U), ry_budget) subject to
/// I(Y;V) ≤ ry_budget.
pub fn optimize_theorem2(
    src: &SourcePair,
    ry_budget: f64,
    opts: &OptimizeOpts,
) -> Result<Optimized<AuxSystem2>> {
    optimize_theorem2_with(src, ry_budget, opts, &[])
}

// ---------------------------------------------------------------------------
// Theorem 3
// ---------------------------------------------------------------------------

fn th3_seeds(
    src: &SecInsSource,
    v1_card: usize,
    v2_card: usize,
    u_card: usize,
    rsec_budget: f64,
) -> Vec<[CondChannel; 2]> {
    let x_card = src.x_card();
    let y_card = src.y_card();
    let y = VarId::new(Var::Y, y_card);
    let outs = vec![VarId::new(Var::V1, v1_card), VarId::new(Var::V2, v2_card)];
    let u_inputs = vec![
        VarId::new(Var::X, x_card),
        VarId::new(Var::V1, v1_card),
        VarId::new(Var::V2, v2_card),
    ];
    let u_out = vec![VarId::new(Var::U, u_card)];

    let const_v12 = CondChannel::deterministic(vec![y], outs.clone(), |_| 0).unwrap();
    let ident_v1 =
        CondChannel::deterministic(vec![y], outs.clone(), move |r| (r % v1_card) * v2_card)
            .unwrap();
    let mut v12_seeds = vec![const_v12, ident_v1];
    if y_card == 2 && v1_card >= 2 {
        let alpha = inv_binary_entropy(1.0 - rsec_budget.min(1.0)).unwrap();
        let width = v1_card * v2_card;
        let mut rows = vec![0.0; 2 * width];
        rows[0] = 1.0 - alpha;
        rows[v2_card] = alpha;
        rows[width] = alpha;
        rows[width + v2_card] = 1.0 - alpha;
        v12_seeds.push(CondChannel::new(vec![y], outs.clone(), rows).unwrap());
    }
    let k = x_card.min(v1_card);
    let mut pad_row = vec![0.0; v1_card * v2_card];
    for v1 in 0..k {
        pad_row[v1 * v2_card] = 1.0 / k as f64;
    }
    v12_seeds.push(CondChannel::new(vec![y], outs, pad_row.repeat(y_card)).unwrap());

    let u_const = CondChannel::deterministic(u_inputs.clone(), u_out.clone(), |_| 0).unwrap();
    // U := X forces every U-conditioned information to zero, so Δ = 0 is
    // always attainable.
    let u_copy_x =
        CondChannel::deterministic(u_inputs.clone(), u_out.clone(), move |r| {
            r / (v1_card * v2_card)
        })
        .unwrap();
    let u_xor_v1 = CondChannel::deterministic(u_inputs, u_out, move |r| {
        let x = r / (v1_card * v2_card);
        let v1 = (r / v2_card) % v1_card;
        (x + v1) % x_card
    })
    .unwrap();

    let mut seeds = Vec::new();
    for v12 in &v12_seeds {
        for u in [&u_const, &u_copy_x, &u_xor_v1] {
            seeds.push([v12.clone(), u.clone()]);
        }
    }
    seeds
}

/// Entropy layout for the secure/insecure score.
const TH3_MARGINALS: [&[Var]; 16] = [
    &[Var::X, Var::U, Var::V2, Var::W],            // 0
    &[Var::U, Var::V2, Var::W],                    // 1
    &[Var::X, Var::V1, Var::U, Var::V2, Var::W],   // 2
    &[Var::V1, Var::U, Var::V2, Var::W],           // 3
    &[Var::X, Var::U, Var::V2],                    // 4
    &[Var::U, Var::V2],                            // 5
    &[Var::X, Var::W, Var::U, Var::V2],            // 6
    &[Var::W, Var::U, Var::V2],                    // 7
    &[Var::X, Var::Z, Var::U, Var::V2],            // 8
    &[Var::Z, Var::U, Var::V2],                    // 9
    &[Var::Y, Var::W],                             // 10
    &[Var::W],                                     // 11
    &[Var::Y, Var::V1, Var::W],                    // 12
    &[Var::V1, Var::W],                            // 13
    &[Var::Y, Var::V1, Var::V2, Var::W],           // 14
    &[Var::V1, Var::V2, Var::W],                   // 15
];

struct Th3Metrics {
    delta_raw: f64,
    rsec: f64,
    rins: f64,
}

fn th3_metrics(plan: &mut JointPlan, chans: &[CondChannel], rsec_budget: f64) -> Th3Metrics {
    let h = plan.entropies(chans);
    let i_xv1_rest = ((h[0] - h[1]) - (h[2] - h[3])).max(0.0);
    let i_xw = ((h[4] - h[5]) - (h[6] - h[7])).max(0.0);
    let i_xz = ((h[4] - h[5]) - (h[8] - h[9])).max(0.0);
    let rsec = ((h[10] - h[11]) - (h[12] - h[13])).max(0.0);
    let rins = ((h[12] - h[13]) - (h[14] - h[15])).max(0.0);
    Th3Metrics {
        delta_raw: (i_xv1_rest.min(rsec_budget) + i_xw - i_xz).max(0.0),
        rsec,
        rins,
    }
}

pub(crate) fn optimize_theorem3_with(
    src: &SecInsSource,
    rsec_budget: f64,
    rins_budget: f64,
    opts: &OptimizeOpts,
    warm: &[AuxSystem3],
) -> Result<Optimized<AuxSystem3>> {
    if rsec_budget < 0.0 || rins_budget < 0.0 {
        return Err(Error::input(format!(
            "negative rate budget ({rsec_budget}, {rins_budget})"
        )));
    }
    let x_card = src.x_card();
    let y_card = src.y_card();
    let v1_cap = y_card + 3;
    let v2_cap = y_card + 4;
    let u_cap = theorem3_u_bound(x_card, y_card);
    let v1_card = opts.v1_card.unwrap_or(y_card).clamp(1, v1_cap);
    let v2_card = opts.v2_card.unwrap_or(y_card).clamp(1, v2_cap);
    let u_card = opts
        .u_card
        .unwrap_or_else(|| u_cap.min(x_card * v1_card * v2_card))
        .clamp(x_card, u_cap);
    let weights = source_weights(src.joint(), Var::Y);

    let mut items: Vec<[CondChannel; 2]> = warm
        .iter()
        .map(|a| [a.v12_channel().clone(), a.u_channel().clone()])
        .collect();
    items.extend(th3_seeds(src, v1_card, v2_card, u_card, rsec_budget));
    let fixed = items.len();
    {
        let [v12, u] = items[fixed - 1].clone();
        eval_theorem3(src, &AuxSystem3::new(v12, u)?, f64::INFINITY)?;
    }

    let total = fixed + opts.starts;
    let runs: Vec<(AuxSystem3, RegionPoint)> = thread_pool().install(|| {
        (0..total)
            .into_par_iter()
            .map(|i| {
                let mut chans: Vec<CondChannel> = if i < fixed {
                    items[i].to_vec()
                } else {
                    let mut rng = stream_rng(opts.seed, i as u64);
                    let v_rows = dirichlet_rows(&mut rng, y_card, v1_card * v2_card);
                    let u_rows = dirichlet_rows(&mut rng, x_card * v1_card * v2_card, u_card);
                    vec![
                        CondChannel::new(
                            vec![VarId::new(Var::Y, y_card)],
                            vec![VarId::new(Var::V1, v1_card), VarId::new(Var::V2, v2_card)],
                            v_rows,
                        )
                        .expect("random rows are a valid channel"),
                        CondChannel::new(
                            vec![
                                VarId::new(Var::X, x_card),
                                VarId::new(Var::V1, v1_card),
                                VarId::new(Var::V2, v2_card),
                            ],
                            vec![VarId::new(Var::U, u_card)],
                            u_rows,
                        )
                        .expect("random rows are a valid channel"),
                    ]
                };
                let mut plan =
                    JointPlan::new(src.joint(), &[&chans[0], &chans[1]], &TH3_MARGINALS);
                let mut score = |chans: &[CondChannel]| {
                    let m = th3_metrics(&mut plan, chans, rsec_budget);
                    m.delta_raw
                        - PENALTY
                            * ((m.rsec - rsec_budget).max(0.0)
                                + (m.rins - rins_budget).max(0.0))
                };
                refine(&mut chans, &mut score, opts);
                let mut plan2 =
                    JointPlan::new(src.joint(), &[&chans[0], &chans[1]], &TH3_MARGINALS);
                let mut violation = |chans: &[CondChannel]| {
                    let m = th3_metrics(&mut plan2, chans, rsec_budget);
                    (m.rsec - rsec_budget).max(m.rins - rins_budget)
                };
                project_feasible(&mut chans, 0, &weights, &mut violation);
                let u = chans.pop().unwrap();
                let v12 = chans.pop().unwrap();
                let aux = AuxSystem3::new(v12, u).expect("search respects the caps");
                let point = eval_theorem3(src, &aux, rsec_budget).expect("projected feasible");
                (aux, point)
            })
            .collect()
    });

    let best = runs
        .iter()
        .map(|(_, p)| p.delta_cap)
        .fold(f64::NEG_INFINITY, f64::max);
    let (aux, point) = runs
        .into_iter()
        .enumerate()
        .filter(|(_, (_, p))| p.delta_cap >= best - TIE_TOL)
        .min_by(|(ia, (_, pa)), (ib, (_, pb))| pa.rx_min.total_cmp(&pb.rx_min).then(ia.cmp(ib)))
        .map(|(_, run)| run)
        .expect("at least one work item");

    Ok(Optimized {
        point,
        aux,
        search: SearchInfo {
            cards_used: vec![(Var::V1, v1_card), (Var::V2, v2_card), (Var::U, u_card)],
            cards_cap: vec![(Var::V1, v1_cap), (Var::V2, v2_cap), (Var::U, u_cap)],
        },
    })
}

/// Maximize the secure/insecure equivocation subject to I(Y;V1|W) ≤ rsec and
/// I(Y;V2|W,V1) ≤ rins.
pub fn optimize_theorem3(
    src: &SecInsSource,
    rsec_budget: f64,
    rins_budget: f64,
    opts: &OptimizeOpts,
) -> Result<Optimized<AuxSystem3>> {
    optimize_theorem3_with(src, rsec_budget, rins_budget, opts, &[])
}
