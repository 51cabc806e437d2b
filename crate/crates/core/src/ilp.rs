//! The discretized integer program bounding the expected number of unilluminated caps.
//!
//! Cap radii `φ ∈ (a_0, π/2]` are bucketed by a grid `a_0 < a_1 < … < a_t = π/2` with
//! `a_0 = π/2 - arccos(1/n)`. Variable `n_i` counts caps with radius in `(a_i, a_{i+1}]`.
//! The program is
//!
//! ```text
//! maximize   Σ n_i · ū_i^s · v̄_i^l
//! subject to Σ n_i · A_n(a_i) ≤ 1               (base caps do not overlap)
//!            Σ_{a_i ≥ π/4} n_i ≤ n + 1          (no n + 2 caps of radius ≥ π/4)
//!            n_i ∈ Z_{≥0}
//! ```
//!
//! where `ū_i` / `v̄_i` bound the probability that a cap in bucket `i` is missed by one
//! randomly rotated simplex / cross-polytope.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{domain, Error, Result};
use crate::sphere::{cap_measure, union_measure_upper, Angle, VertexFamily};

/// Relative slack allowed when checking the two constraints in binary64.
pub const FEASIBILITY_TOL: f64 = 1e-12;
/// Largest lattice that [`brute_force_enumerate`] agrees to walk.
pub const BRUTE_FORCE_LIMIT: f64 = 1e7;

const REDUCED_COST_EPS: f64 = 1e-12;
const PIVOT_EPS: f64 = 1e-12;
const MAX_LP_ITERS: usize = 20_000;

/// How the radius grid between `a_0` and `π/2` is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum GridKind {
    /// `t` equal steps from `a_0` to `π/2`.
    #[default]
    Uniform,
    /// One-degree steps from `a_0`, the last step truncated at `π/2`.
    Degree,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    n: usize,
    kind: GridKind,
    angles: Vec<f64>,
}

impl Grid {
    /// Smallest radius a cap can have without being illuminated by any simplex rotation.
    pub fn start(n: usize) -> f64 {
        FRAC_PI_2 - libm::acos(1.0 / n as f64)
    }

    pub fn new(kind: GridKind, n: usize, t: usize) -> Result<Self> {
        match kind {
            GridKind::Uniform => Self::uniform(n, t),
            GridKind::Degree => Self::degree(n),
        }
    }

    pub fn uniform(n: usize, t: usize) -> Result<Self> {
        if n < 4 {
            return Err(domain!("grid needs n >= 4 (got {n})"));
        }
        if t == 0 {
            return Err(domain!("grid needs t >= 1"));
        }
        let a0 = Self::start(n);
        let span = FRAC_PI_2 - a0;
        let mut angles: Vec<f64> = (0..t).map(|i| a0 + span * i as f64 / t as f64).collect();
        angles.push(FRAC_PI_2);
        Ok(Grid { n, kind: GridKind::Uniform, angles })
    }

    pub fn degree(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(domain!("grid needs n >= 4 (got {n})"));
        }
        let a0 = Self::start(n);
        let step = PI / 180.0;
        let mut angles = vec![a0];
        let mut i = 1;
        loop {
            let a = a0 + step * i as f64;
            if a >= FRAC_PI_2 {
                break;
            }
            angles.push(a);
            i += 1;
        }
        angles.push(FRAC_PI_2);
        Ok(Grid { n, kind: GridKind::Degree, angles })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Number of buckets.
    pub fn t(&self) -> usize {
        self.angles.len() - 1
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

/// One radius bucket `(a_i, a_{i+1}]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bucket {
    pub lower: f64,
    pub upper: f64,
    /// Upper bound on the probability that a random simplex misses a cap of this bucket.
    pub simplex_miss: f64,
    /// Upper bound on the probability that a random cross-polytope misses such a cap.
    pub cross_miss: f64,
    /// `A_n(a_i)`, a lower bound on the area of any cap in the bucket.
    pub cost: f64,
    /// `a_i ≥ π/4`.
    pub large: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightTable {
    pub n: usize,
    pub steps: usize,
    pub buckets: Vec<Bucket>,
}

impl WeightTable {
    /// Integer program for `s` rotated simplices and `l` rotated cross-polytopes.
    pub fn instance(&self, s: u32, l: u32) -> IlpInstance {
        let weights = self
            .buckets
            .iter()
            .map(|b| libm::pow(b.simplex_miss, s as f64) * libm::pow(b.cross_miss, l as f64))
            .collect();
        IlpInstance {
            weights,
            costs: self.buckets.iter().map(|b| b.cost).collect(),
            large: self.buckets.iter().map(|b| b.large).collect(),
            large_cap: self.n as u64 + 1,
        }
    }
}

fn miss_probability(family: &VertexFamily, complement: f64, steps: usize) -> Result<f64> {
    if complement <= 0.0 {
        // Degenerate target cap: nothing can hit it.
        return Ok(1.0);
    }
    let covered = union_measure_upper(family, Angle::new(complement)?, steps)?;
    Ok((1.0 - covered.value).clamp(0.0, 1.0))
}

/// Per-bucket weights and costs for dimension `n`, using `steps` Riemann steps for the
/// pairwise-intersection bounds.
///
/// Miss probabilities use the right endpoint `a_{i+1}` (the largest radius in the bucket,
/// hence the smallest target cap) and costs use the left endpoint `a_i`.
pub fn build_weights(n: usize, grid: &Grid, steps: usize) -> Result<WeightTable> {
    if n < 4 {
        return Err(domain!("weights need n >= 4 (got {n})"));
    }
    if grid.n() != n {
        return Err(domain!("grid was built for n = {}, not {n}", grid.n()));
    }
    let simplex = VertexFamily::simplex(n)?;
    let cross = VertexFamily::cross_polytope(n)?;
    let buckets = grid
        .angles()
        .windows(2)
        .map(|w| {
            let (lower, upper) = (w[0], w[1]);
            let complement = FRAC_PI_2 - upper;
            Ok(Bucket {
                lower,
                upper,
                simplex_miss: miss_probability(&simplex, complement, steps)?,
                cross_miss: miss_probability(&cross, complement, steps)?,
                cost: cap_measure(n, Angle::new(lower)?)?.value,
                large: lower >= FRAC_PI_4,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightTable { n, steps, buckets })
}

/// A two-constraint integer knapsack: `max Σ w_i x_i` with `Σ c_i x_i ≤ 1`,
/// `Σ_{large} x_i ≤ large_cap`, `x ∈ Z^t_{≥0}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IlpInstance {
    weights: Vec<f64>,
    costs: Vec<f64>,
    large: Vec<bool>,
    large_cap: u64,
}

impl IlpInstance {
    pub fn new(weights: Vec<f64>, costs: Vec<f64>, large: Vec<bool>, large_cap: u64) -> Result<Self> {
        let t = weights.len();
        if costs.len() != t || large.len() != t {
            return Err(domain!("weights, costs and flags must have equal length"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(domain!("weights must be finite and non-negative"));
        }
        if costs.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(domain!("costs must be finite and positive"));
        }
        Ok(IlpInstance { weights, costs, large, large_cap })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn large(&self) -> &[bool] {
        &self.large
    }

    pub fn large_cap(&self) -> u64 {
        self.large_cap
    }

    /// Same instance with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.weights.iter().map(|w| w * factor).collect(),
            self.costs.clone(),
            self.large.clone(),
            self.large_cap,
        )
    }

    pub fn objective(&self, assignment: &[u64]) -> f64 {
        self.weights.iter().zip(assignment).map(|(w, &x)| w * x as f64).sum()
    }

    /// Whether `assignment` satisfies both constraints (capacity up to [`FEASIBILITY_TOL`]).
    pub fn is_feasible(&self, assignment: &[u64]) -> bool {
        if assignment.len() != self.len() {
            return false;
        }
        let used: f64 = self.costs.iter().zip(assignment).map(|(c, &x)| c * x as f64).sum();
        let large: u64 = self.large.iter().zip(assignment).filter(|(l, _)| **l).map(|(_, &x)| x).sum();
        used <= 1.0 + FEASIBILITY_TOL && large <= self.large_cap
    }

    /// `floor(1/c_i)`, capped by the cardinality limit for large buckets.
    fn integer_upper(&self, i: usize) -> f64 {
        let by_cost = libm::floor((1.0 + FEASIBILITY_TOL) / self.costs[i]);
        if self.large[i] {
            by_cost.min(self.large_cap as f64)
        } else {
            by_cost
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IlpSolution {
    /// Optimal objective value `M`.
    pub objective: f64,
    pub assignment: Vec<u64>,
    /// Root relaxation value (an upper bound on `objective`).
    pub lp_bound: f64,
    /// Best remaining node bound minus `objective` at termination (0 when proven optimal).
    pub gap: f64,
    pub nodes_explored: usize,
}

impl IlpSolution {
    /// Non-zero entries of the assignment as `(bucket, count)` pairs.
    pub fn sparse_assignment(&self) -> Vec<(usize, u64)> {
        self.assignment.iter().copied().enumerate().filter(|(_, x)| *x > 0).collect()
    }
}

/// Continuous relaxation of a bounded two-row problem, solved by a bounded-variable primal
/// simplex with an explicit 2×2 basis inverse.
struct BoundedLp<'a> {
    inst: &'a IlpInstance,
    lo: &'a [f64],
    hi: &'a [f64],
}

#[derive(Debug, Clone)]
struct Relaxation {
    value: f64,
    x: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Lower,
    Upper,
    Basic,
}

impl BoundedLp<'_> {
    fn column(&self, j: usize) -> [f64; 2] {
        let t = self.inst.len();
        if j < t {
            [self.inst.costs[j], if self.inst.large[j] { 1.0 } else { 0.0 }]
        } else if j == t {
            [1.0, 0.0]
        } else {
            [0.0, 1.0]
        }
    }

    fn weight(&self, j: usize) -> f64 {
        if j < self.inst.len() {
            self.inst.weights[j]
        } else {
            0.0
        }
    }

    fn bounds(&self, j: usize) -> (f64, f64) {
        if j < self.inst.len() {
            (self.lo[j], self.hi[j])
        } else {
            (0.0, f64::INFINITY)
        }
    }

    fn solve(&self) -> Option<Relaxation> {
        let t = self.inst.len();
        let rhs = [1.0, self.inst.large_cap as f64];
        let mut status: Vec<Status> = vec![Status::Lower; t + 2];
        let mut x: Vec<f64> = (0..t + 2).map(|j| self.bounds(j).0).collect();
        let mut basis = [t, t + 1];
        status[t] = Status::Basic;
        status[t + 1] = Status::Basic;

        let used = |x: &[f64], row: usize| -> f64 {
            (0..t).map(|j| self.column(j)[row] * x[j]).sum::<f64>()
        };
        let scale = |row: usize| 1.0 + rhs[row].abs();
        x[t] = rhs[0] - used(&x, 0);
        x[t + 1] = rhs[1] - used(&x, 1);
        if x[t] < -FEASIBILITY_TOL * scale(0) || x[t + 1] < -FEASIBILITY_TOL * scale(1) {
            return None;
        }
        x[t] = x[t].max(0.0);
        x[t + 1] = x[t + 1].max(0.0);

        for iter in 0..MAX_LP_ITERS {
            let b0 = self.column(basis[0]);
            let b1 = self.column(basis[1]);
            let det = b0[0] * b1[1] - b1[0] * b0[1];
            let inv = [[b1[1] / det, -b1[0] / det], [-b0[1] / det, b0[0] / det]];
            let wb = [self.weight(basis[0]), self.weight(basis[1])];
            let y = [wb[0] * inv[0][0] + wb[1] * inv[1][0], wb[0] * inv[0][1] + wb[1] * inv[1][1]];

            // Pricing: Dantzig, falling back to Bland's rule if the method stalls.
            let bland = iter > 4 * (t + 2);
            let mut enter: Option<(usize, f64, f64)> = None;
            for j in 0..t + 2 {
                if status[j] == Status::Basic {
                    continue;
                }
                let (lo, hi) = self.bounds(j);
                if hi <= lo {
                    continue;
                }
                let a = self.column(j);
                let d = self.weight(j) - y[0] * a[0] - y[1] * a[1];
                let dir = match status[j] {
                    Status::Lower if d > REDUCED_COST_EPS => 1.0,
                    Status::Upper if d < -REDUCED_COST_EPS => -1.0,
                    _ => continue,
                };
                let better = match enter {
                    None => true,
                    Some((_, _, best)) => !bland && d.abs() > best,
                };
                if better {
                    enter = Some((j, dir, d.abs()));
                }
            }
            let Some((j, dir, _)) = enter else {
                let value = (0..t).map(|i| self.inst.weights[i] * x[i]).sum();
                x.truncate(t);
                return Some(Relaxation { value, x });
            };

            let a = self.column(j);
            let alpha = [inv[0][0] * a[0] + inv[0][1] * a[1], inv[1][0] * a[0] + inv[1][1] * a[1]];
            let (lo_j, hi_j) = self.bounds(j);
            let mut step = hi_j - lo_j;
            let mut leaving: Option<(usize, Status)> = None;
            for k in 0..2 {
                let delta = -dir * alpha[k];
                if delta.abs() <= PIVOT_EPS {
                    continue;
                }
                let (lb, ub) = self.bounds(basis[k]);
                let xb = x[basis[k]];
                let (limit, hit) = if delta < 0.0 {
                    (((xb - lb) / -delta).max(0.0), Status::Lower)
                } else if ub.is_finite() {
                    (((ub - xb) / delta).max(0.0), Status::Upper)
                } else {
                    continue;
                };
                if limit < step || (limit == step && leaving.is_some_and(|(kk, _)| basis[k] < basis[kk])) {
                    step = limit;
                    leaving = Some((k, hit));
                }
            }
            if !step.is_finite() {
                // Cannot happen with positive costs; treat as a failed relaxation.
                return None;
            }
            x[j] += dir * step;
            x[basis[0]] -= dir * alpha[0] * step;
            x[basis[1]] -= dir * alpha[1] * step;
            match leaving {
                None => {
                    x[j] = if dir > 0.0 { hi_j } else { lo_j };
                    status[j] = if dir > 0.0 { Status::Upper } else { Status::Lower };
                }
                Some((k, hit)) => {
                    let out = basis[k];
                    let (lb, ub) = self.bounds(out);
                    x[out] = if hit == Status::Lower { lb } else { ub };
                    status[out] = hit;
                    status[j] = Status::Basic;
                    basis[k] = j;
                }
            }
        }
        None
    }
}

/// Optimal value of the continuous relaxation (`x ≥ 0` real).
///
/// Since the relaxation only enlarges the feasible set of a maximization problem, the
/// value is an upper bound on the integer optimum.
pub fn lp_relax_bound(inst: &IlpInstance) -> f64 {
    let lo = vec![0.0; inst.len()];
    let hi = vec![f64::INFINITY; inst.len()];
    BoundedLp { inst, lo: &lo, hi: &hi }
        .solve()
        .map(|r| r.value)
        .unwrap_or(0.0)
}

#[derive(Debug)]
struct Node {
    bound: f64,
    id: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // Max-heap on bound; ties go to the older node.
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound).then_with(|| other.id.cmp(&self.id))
    }
}

/// Result of [`solve_with_cutoff`].
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Optimal(IlpSolution),
    /// A feasible point with objective at least the cutoff was found; the search stopped.
    CutOff { incumbent: f64, nodes_explored: usize },
}

fn integral_tol(v: f64) -> f64 {
    1e-9 * v.abs().max(1.0)
}

fn prune_tol(v: f64) -> f64 {
    1e-12 * v.abs().max(1.0)
}

fn usage(inst: &IlpInstance, n: &[u64]) -> (f64, u64) {
    let used = inst.costs.iter().zip(n).map(|(c, &k)| c * k as f64).sum();
    let large = inst.large.iter().zip(n).filter(|(l, _)| **l).map(|(_, &k)| k).sum();
    (used, large)
}

/// Removes units from the worst-ratio buckets until both constraints hold.
fn repair(inst: &IlpInstance, n: &mut [u64], order: &[usize]) {
    for _ in 0..4 * n.len() + 16 {
        let (used, large) = usage(inst, n);
        if large > inst.large_cap {
            if let Some(i) = order.iter().rev().copied().find(|&i| inst.large[i] && n[i] > 0) {
                n[i] -= (large - inst.large_cap).min(n[i]);
                continue;
            }
        }
        if used <= 1.0 + FEASIBILITY_TOL {
            return;
        }
        let Some(i) = order.iter().rev().copied().find(|&i| n[i] > 0) else { return };
        let excess = libm::ceil((used - 1.0) / inst.costs[i]).max(1.0);
        n[i] -= (excess as u64).min(n[i]);
    }
    n.iter_mut().for_each(|k| *k = 0);
}

/// Rounds the relaxation down and fills the remaining room greedily by weight/cost ratio.
fn round_and_fill(inst: &IlpInstance, x: &[f64], hi: &[f64], order: &[usize]) -> Vec<u64> {
    let mut n: Vec<u64> = x.iter().map(|v| libm::floor(v + integral_tol(*v)).max(0.0) as u64).collect();
    repair(inst, &mut n, order);
    let (mut used, mut large) = usage(inst, &n);
    for &i in order {
        if inst.weights[i] <= 0.0 {
            continue;
        }
        let room = libm::floor((1.0 + FEASIBILITY_TOL - used) / inst.costs[i]).max(0.0);
        let mut add = room.min((hi[i] - n[i] as f64).max(0.0));
        if inst.large[i] {
            add = add.min(inst.large_cap.saturating_sub(large) as f64);
        }
        let add = add as u64;
        if add > 0 {
            n[i] += add;
            used += inst.costs[i] * add as f64;
            if inst.large[i] {
                large += add;
            }
        }
    }
    repair(inst, &mut n, order);
    n
}

/// Exact integer optimum by best-first branch and bound.
pub fn solve_exact(inst: &IlpInstance) -> IlpSolution {
    match solve_with_cutoff(inst, f64::INFINITY) {
        SolveOutcome::Optimal(s) => s,
        SolveOutcome::CutOff { .. } => unreachable!("an infinite cutoff is never reached"),
    }
}

/// Branch and bound that stops early once a feasible point reaches `cutoff`.
///
/// Nodes are explored best-bound first (ties by creation order) and branch on the most
/// fractional variable. Bounds come from the node's bounded continuous relaxation; each
/// relaxation is also rounded into a feasible incumbent.
pub fn solve_with_cutoff(inst: &IlpInstance, cutoff: f64) -> SolveOutcome {
    let t = inst.len();
    let lp_bound = lp_relax_bound(inst);
    let zero = vec![0u64; t];
    if t == 0 || inst.weights.iter().all(|&w| w == 0.0) {
        return SolveOutcome::Optimal(IlpSolution {
            objective: 0.0,
            assignment: zero,
            lp_bound,
            gap: 0.0,
            nodes_explored: 0,
        });
    }

    let mut order: Vec<usize> = (0..t).collect();
    order.sort_by(|&a, &b| {
        let ra = inst.weights[a] / inst.costs[a];
        let rb = inst.weights[b] / inst.costs[b];
        rb.total_cmp(&ra).then(a.cmp(&b))
    });

    let lo0 = vec![0.0; t];
    let hi0: Vec<f64> = (0..t).map(|i| inst.integer_upper(i)).collect();
    let mut best_value = 0.0;
    let mut best = zero;
    let mut nodes = 0usize;
    let mut next_id = 0usize;
    let mut heap = BinaryHeap::new();

    let root = BoundedLp { inst, lo: &lo0, hi: &hi0 }.solve();
    if let Some(r) = root {
        heap.push(Node { bound: r.value, id: next_id, lo: lo0, hi: hi0, x: r.x });
        next_id += 1;
    }

    let mut final_bound = best_value;
    while let Some(node) = heap.pop() {
        if node.bound <= best_value + prune_tol(best_value) {
            // Best-first: every remaining node is bounded by this one.
            final_bound = node.bound;
            break;
        }
        nodes += 1;

        let candidate = round_and_fill(inst, &node.x, &node.hi, &order);
        let value = inst.objective(&candidate);
        if value > best_value {
            best_value = value;
            best = candidate;
            if best_value >= cutoff {
                return SolveOutcome::CutOff { incumbent: best_value, nodes_explored: nodes };
            }
        }

        let branch = node
            .x
            .iter()
            .enumerate()
            .filter_map(|(i, &v)| {
                let frac = v - libm::floor(v);
                let dist = frac.min(1.0 - frac);
                (dist > integral_tol(v)).then_some((i, dist))
            })
            .fold(None, |acc: Option<(usize, f64)>, (i, d)| match acc {
                Some((_, bd)) if bd >= d => acc,
                _ => Some((i, d)),
            });
        let Some((j, _)) = branch else {
            // Integral relaxation: its rounding is already the node optimum.
            continue;
        };
        let v = node.x[j];
        for down in [true, false] {
            let mut lo = node.lo.clone();
            let mut hi = node.hi.clone();
            if down {
                hi[j] = libm::floor(v);
            } else {
                lo[j] = libm::ceil(v);
            }
            if lo[j] > hi[j] {
                continue;
            }
            if let Some(r) = (BoundedLp { inst, lo: &lo, hi: &hi }).solve() {
                if r.value > best_value + prune_tol(best_value) {
                    heap.push(Node { bound: r.value, id: next_id, lo, hi, x: r.x });
                    next_id += 1;
                }
            }
        }
    }
    let gap = (final_bound - best_value).max(0.0);
    SolveOutcome::Optimal(IlpSolution {
        objective: best_value,
        assignment: best,
        lp_bound,
        gap,
        nodes_explored: nodes,
    })
}

/// Exhaustive enumeration of the feasible lattice; a test oracle for small instances.
///
/// Refuses instances whose box `∏ (⌊1/c_i⌋ + 1)` exceeds [`BRUTE_FORCE_LIMIT`] points.
pub fn brute_force_enumerate(inst: &IlpInstance) -> Result<IlpSolution> {
    let t = inst.len();
    let uppers: Vec<u64> = (0..t).map(|i| inst.integer_upper(i) as u64).collect();
    let points = uppers.iter().fold(1.0f64, |acc, &u| acc * (u as f64 + 1.0));
    if points > BRUTE_FORCE_LIMIT {
        return Err(Error::SearchSpaceTooLarge { points, limit: BRUTE_FORCE_LIMIT });
    }

    struct Walk<'a> {
        inst: &'a IlpInstance,
        uppers: &'a [u64],
        current: Vec<u64>,
        best: Vec<u64>,
        best_value: f64,
        visited: usize,
    }
    impl Walk<'_> {
        fn visit(&mut self, i: usize) {
            if i == self.uppers.len() {
                self.visited += 1;
                if self.inst.is_feasible(&self.current) {
                    let v = self.inst.objective(&self.current);
                    if v > self.best_value {
                        self.best_value = v;
                        self.best.clone_from(&self.current);
                    }
                }
                return;
            }
            for k in 0..=self.uppers[i] {
                self.current[i] = k;
                self.visit(i + 1);
            }
            self.current[i] = 0;
        }
    }

    let mut walk = Walk {
        inst,
        uppers: &uppers,
        current: vec![0; t],
        best: vec![0; t],
        best_value: 0.0,
        visited: 0,
    };
    walk.visit(0);
    Ok(IlpSolution {
        objective: walk.best_value,
        assignment: walk.best,
        lp_bound: lp_relax_bound(inst),
        gap: 0.0,
        nodes_explored: walk.visited,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(w: &[f64], c: &[f64], large: &[bool], cap: u64) -> IlpInstance {
        IlpInstance::new(w.to_vec(), c.to_vec(), large.to_vec(), cap).unwrap()
    }

    #[test]
    fn uniform_grid_shape() {
        for n in 4..=15 {
            let g = Grid::uniform(n, 200).unwrap();
            assert_eq!(g.t(), 200);
            let a = g.angles();
            assert_eq!(a[200], FRAC_PI_2);
            assert!(a.windows(2).all(|w| w[0] < w[1]));
            assert!(a[0] < FRAC_PI_4 && FRAC_PI_4 < a[200]);
            assert!((a[0] - (FRAC_PI_2 - libm::acos(1.0 / n as f64))).abs() < 1e-15);
        }
        assert!(Grid::uniform(3, 10).is_err());
        assert!(Grid::uniform(5, 0).is_err());
    }

    #[test]
    fn degree_grid_shape() {
        let g = Grid::degree(4).unwrap();
        let a = g.angles();
        assert_eq!(*a.last().unwrap(), FRAC_PI_2);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!((a[1] - a[0] - PI / 180.0).abs() < 1e-15);
        assert_eq!(g.t(), libm::ceil((FRAC_PI_2 - a[0]) / (PI / 180.0)) as usize);
    }

    #[test]
    fn weights_match_reference_table() {
        // Spot values of (a_i, ū_i, v̄_i, c_i) for n = 4, t = N = 200, computed with an
        // independent double-precision evaluation of the same bucket rules.
        let refs = [
            (0, 0.2526802551420786, 0.01571457111068897, 0.0, 0.0033800677474787647),
            (10, 0.31858605872471946, 0.01571457111068897, 0.0, 0.006723865596266495),
            (50, 0.582209273055283, 0.19324309099162895, 0.012214043514779727, 0.03912981721006041),
            (100, 0.9117382909684876, 0.729382180959347, 0.5670114895349552, 0.136114200612208),
            (150, 1.241267308881692, 0.9650034536836282, 0.944005525893805, 0.29764555565958206),
            (199, 1.5642057464366326, 1.0, 1.0, 0.49580436697972574),
        ];
        let grid = Grid::uniform(4, 200).unwrap();
        let table = build_weights(4, &grid, 200).unwrap();
        for (i, a, u, v, c) in refs {
            let b = &table.buckets[i];
            assert!((b.lower - a).abs() < 1e-14, "a_{i}");
            assert!((b.simplex_miss - u).abs() < 1e-12, "u_{i}: {} vs {u}", b.simplex_miss);
            assert!((b.cross_miss - v).abs() < 1e-12, "v_{i}: {} vs {v}", b.cross_miss);
            assert!(((b.cost - c) / c).abs() < 1e-12, "c_{i}");
        }
    }

    #[test]
    fn cross_polytope_covering_and_disjoint_buckets() {
        let n = 7;
        let grid = Grid::uniform(n, 200).unwrap();
        let table = build_weights(n, &grid, 200).unwrap();
        let cover = FRAC_PI_2 - libm::acos(1.0 / libm::sqrt(n as f64));
        for b in &table.buckets {
            if b.upper <= cover {
                assert_eq!(b.cross_miss, 0.0);
            }
            let theta = FRAC_PI_2 - b.upper;
            if theta > 0.0 && theta <= FRAC_PI_4 {
                let cap = cap_measure(n, Angle::new(theta).unwrap()).unwrap().value;
                assert!((b.cross_miss - (1.0 - 2.0 * n as f64 * cap)).abs() < 1e-15);
            }
            assert!((0.0..=1.0).contains(&b.simplex_miss) && (0.0..=1.0).contains(&b.cross_miss));
            assert!(b.cost > 0.0);
        }
    }

    #[test]
    fn lp_relaxation_trivial_cases() {
        let i = inst(&[0.0, 0.0], &[0.1, 0.2], &[false, true], 5);
        assert_eq!(lp_relax_bound(&i), 0.0);
        let i = inst(&[1.0], &[0.25], &[false], 5);
        assert!((lp_relax_bound(&i) - 4.0).abs() < 1e-12);
        let i = inst(&[1.0], &[0.01], &[true], 3);
        assert!((lp_relax_bound(&i) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn greedy_optimum_single_dominant_bucket() {
        let i = inst(&[0.5, 0.5, 0.5], &[0.3, 0.4, 0.45], &[false, false, false], 5);
        let s = solve_exact(&i);
        assert!((s.objective - 1.5).abs() < 1e-12);
        assert_eq!(s.assignment, vec![3, 0, 0]);
        assert!(s.gap <= 1e-12);
    }

    #[test]
    fn cardinality_constraint_binds() {
        // Capacity alone admits 10 copies of the large bucket; the cardinality cap is 2.
        let i = inst(&[1.0, 0.1], &[0.1, 0.1], &[true, false], 2);
        let s = brute_force_enumerate(&i).unwrap();
        assert_eq!(s.assignment, vec![2, 8]);
        assert!((s.objective - 2.8).abs() < 1e-12);
        assert_eq!(solve_exact(&i).assignment, vec![2, 8]);
    }

    #[test]
    fn empty_instance() {
        let i = inst(&[], &[], &[], 3);
        assert_eq!(brute_force_enumerate(&i).unwrap().objective, 0.0);
        assert_eq!(solve_exact(&i).objective, 0.0);
    }

    #[test]
    fn brute_force_rejects_large_boxes() {
        let i = inst(&[1.0; 4], &[1e-3; 4], &[false; 4], 5);
        assert!(matches!(brute_force_enumerate(&i), Err(Error::SearchSpaceTooLarge { .. })));
    }

    #[test]
    fn rejects_malformed_instances() {
        assert!(IlpInstance::new(vec![1.0], vec![0.0], vec![false], 1).is_err());
        assert!(IlpInstance::new(vec![-1.0], vec![0.5], vec![false], 1).is_err());
        assert!(IlpInstance::new(vec![1.0, 2.0], vec![0.5], vec![false], 1).is_err());
    }

    #[test]
    fn cutoff_stops_early() {
        let i = inst(&[1.0, 0.9], &[0.3, 0.25], &[false, false], 5);
        match solve_with_cutoff(&i, 0.5) {
            SolveOutcome::CutOff { incumbent, .. } => assert!(incumbent >= 0.5),
            other => panic!("expected a cut-off, got {other:?}"),
        }
    }

    #[test]
    fn reference_optimum_dimension_four() {
        // One rotated simplex in R^4, t = N = 200: reference optimum from an independent
        // MILP solve, attained at n_70 = 1, n_71 = 13.
        let grid = Grid::uniform(4, 200).unwrap();
        let table = build_weights(4, &grid, 200).unwrap();
        let s = solve_exact(&table.instance(1, 0));
        assert!((s.objective - 6.256983739103035).abs() < 1e-9, "{}", s.objective);
        assert!(table.instance(1, 0).is_feasible(&s.assignment));
        assert!(s.objective <= s.lp_bound + 1e-9);
    }
}
