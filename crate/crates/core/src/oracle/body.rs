use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;

use super::{random_rotation, Rng};
use crate::error::{domain, Error, Result};
use crate::lp::{self, Constraint, LinearProgram, Relation};
use crate::sphere::{generate_points, VertexFamily};
use crate::vector::{angle_between, dot, norm, scaled};

/// Attempts made by [`illuminate`] before giving up.
pub const DEFAULT_RETRIES: usize = 100;
/// Smallest positive-combination margin accepted by [`positive_hull_spans`].
pub const SPAN_MARGIN: f64 = 1e-9;

/// Convex hull of the unit ball and finitely many outer vertices `x_i`.
///
/// Vertex `x_i` casts the cap `C[x̂_i, φ_i]` with `φ_i = arccos(1/‖x_i‖)`; those caps must
/// have pairwise disjoint interiors.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CapBody {
    n: usize,
    vertices: Vec<Vec<f64>>,
}

impl CapBody {
    pub fn new(n: usize, vertices: Vec<Vec<f64>>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidBody(alloc::format!("dimension {n} is below 3")));
        }
        for (i, x) in vertices.iter().enumerate() {
            if x.len() != n {
                return Err(Error::InvalidBody(alloc::format!("vertex {i} has {} coordinates, expected {n}", x.len())));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidBody(alloc::format!("vertex {i} is not finite")));
            }
            if !(norm(x) > 1.0) {
                return Err(Error::InvalidBody(alloc::format!("vertex {i} lies in the unit ball")));
            }
        }
        let body = CapBody { n, vertices };
        for i in 0..body.vertices.len() {
            for j in i + 1..body.vertices.len() {
                let gap = angle_between(&body.center(i), &body.center(j));
                if gap < body.radius(i) + body.radius(j) {
                    return Err(Error::InvalidBody(alloc::format!("caps {i} and {j} overlap")));
                }
            }
        }
        Ok(body)
    }

    /// Builds the body whose caps are `C[c_i, φ_i]`; centres are normalized.
    pub fn from_caps(n: usize, centers: &[Vec<f64>], radii: &[f64]) -> Result<Self> {
        if centers.len() != radii.len() {
            return Err(Error::InvalidBody("centre and radius counts differ".to_string()));
        }
        let mut vertices = Vec::with_capacity(centers.len());
        for (c, &phi) in centers.iter().zip(radii) {
            if !(phi > 0.0 && phi < FRAC_PI_2) {
                return Err(Error::InvalidBody(alloc::format!("cap radius {phi} outside (0, π/2)")));
            }
            let r = norm(c);
            if !(r > 0.0) {
                return Err(Error::InvalidBody("zero cap centre".to_string()));
            }
            vertices.push(scaled(c, 1.0 / (r * libm::cos(phi))));
        }
        Self::new(n, vertices)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// `x̂_i`.
    pub fn center(&self, i: usize) -> Vec<f64> {
        let x = &self.vertices[i];
        scaled(x, 1.0 / norm(x))
    }

    /// `φ_i = arccos(1/‖x_i‖)`.
    pub fn radius(&self, i: usize) -> f64 {
        libm::acos(1.0 / norm(&self.vertices[i]))
    }
}

/// Why a direction is in a [`DirectionSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", content = "index", rename_all = "snake_case"))]
pub enum Provenance {
    /// Vertex of the `k`-th rotated simplex.
    Simplex(usize),
    /// Vertex of the `k`-th rotated cross-polytope.
    CrossPolytope(usize),
    /// `-x̂_i`, aimed at vertex `i` directly.
    Vertex(usize),
    /// Supplied by the caller.
    Given,
}

/// Unit directions with their provenance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DirectionSet {
    n: usize,
    directions: Vec<Vec<f64>>,
    provenance: Vec<Provenance>,
}

impl DirectionSet {
    pub fn empty(n: usize) -> Self {
        DirectionSet { n, directions: Vec::new(), provenance: Vec::new() }
    }

    /// Normalizes and tags every vector as [`Provenance::Given`].
    pub fn new(n: usize, directions: Vec<Vec<f64>>) -> Result<Self> {
        let mut set = Self::empty(n);
        for d in directions {
            set.push(d, Provenance::Given)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, direction: Vec<f64>, provenance: Provenance) -> Result<()> {
        if direction.len() != self.n {
            return Err(domain!("direction has {} coordinates, expected {}", direction.len(), self.n));
        }
        let r = norm(&direction);
        if !(r > 0.0 && r.is_finite()) {
            return Err(domain!("direction must be a finite non-zero vector"));
        }
        self.directions.push(scaled(&direction, 1.0 / r));
        self.provenance.push(provenance);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }
}

/// Per-vertex outcome of [`verify_illumination`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IlluminationVerdict {
    /// `lit[i]` is true when some direction illuminates vertex `i`.
    pub lit: Vec<bool>,
    pub spans: bool,
    pub illuminated: bool,
}

impl IlluminationVerdict {
    pub fn dark(&self) -> Vec<usize> {
        self.lit.iter().enumerate().filter(|(_, &l)| !l).map(|(i, _)| i).collect()
    }
}

fn lit_by(body: &CapBody, i: usize, direction: &[f64]) -> bool {
    let target: Vec<f64> = body.center(i).iter().map(|v| -v).collect();
    angle_between(direction, &target) < FRAC_PI_2 - body.radius(i)
}

fn lit_vertices(body: &CapBody, dirs: &DirectionSet) -> Vec<bool> {
    (0..body.len()).map(|i| dirs.directions().iter().any(|d| lit_by(body, i, d))).collect()
}

/// Checks that every vertex is illuminated (strictly) and that the directions positively
/// span `R^n`, so the unit-ball part of the boundary is lit too.
pub fn verify_illumination(body: &CapBody, dirs: &DirectionSet) -> Result<IlluminationVerdict> {
    if body.dim() != dirs.dim() {
        return Err(domain!("body is in R^{} but directions are in R^{}", body.dim(), dirs.dim()));
    }
    let lit = lit_vertices(body, dirs);
    let spans = positive_hull_spans(dirs.directions());
    let illuminated = spans && lit.iter().all(|&l| l);
    Ok(IlluminationVerdict { lit, spans, illuminated })
}

/// True when the positive hull of `dirs` is all of `R^n`.
///
/// Requires linear span of rank `n` and a strictly positive combination summing to zero,
/// found by maximizing `δ` over `λ_j = δ + e_j`, `e_j ≥ 0`, `Σ λ_j v_j = 0`, `Σ λ_j = 1`.
pub fn positive_hull_spans(dirs: &[Vec<f64>]) -> bool {
    let Some(n) = dirs.first().map(Vec::len) else {
        return false;
    };
    let k = dirs.len();
    if k < n + 1 || dirs.iter().any(|d| d.len() != n) {
        return false;
    }
    let m = DMatrix::from_fn(n, k, |i, j| dirs[j][i]);
    if m.rank(1e-9) < n {
        return false;
    }
    // Variables: δ, e_1..e_k.
    let mut objective = vec![0.0; k + 1];
    objective[0] = 1.0;
    let mut constraints = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row = Vec::with_capacity(k + 1);
        row.push(dirs.iter().map(|d| d[i]).sum());
        row.extend(dirs.iter().map(|d| d[i]));
        constraints.push(Constraint::new(row, Relation::Eq, 0.0));
    }
    let mut total = vec![1.0; k + 1];
    total[0] = k as f64;
    constraints.push(Constraint::new(total, Relation::Eq, 1.0));
    match lp::solve(&LinearProgram { objective, constraints }) {
        Ok(sol) => sol.objective > SPAN_MARGIN,
        Err(_) => false,
    }
}

/// Among `≥ n + 2` unit vectors of `R^n`, returns the first pair `(i, j)` with
/// `⟨x_i, x_j⟩ ≥ 0`.
pub fn check_packing_lemma(points: &[Vec<f64>]) -> Result<(usize, usize)> {
    let Some(n) = points.first().map(Vec::len) else {
        return Err(domain!("no points given"));
    };
    if points.len() < n + 2 {
        return Err(domain!("need at least n + 2 = {} points (got {})", n + 2, points.len()));
    }
    if points.iter().any(|p| p.len() != n) {
        return Err(domain!("points have inconsistent dimensions"));
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if dot(&points[i], &points[j]) >= 0.0 {
                return Ok((i, j));
            }
        }
    }
    Err(Error::PackingCounterexample(points.len()))
}

fn push_rotated(set: &mut DirectionSet, family: &VertexFamily, rng: &mut Rng, tag: Provenance) -> Result<()> {
    let rot = random_rotation(family.dim(), rng)?;
    for p in generate_points(family) {
        set.push(rot.apply(&p), tag)?;
    }
    Ok(())
}

/// [`illuminate_with`] using [`DEFAULT_RETRIES`] attempts.
pub fn illuminate(body: &CapBody, s: usize, l: usize, extra_budget: usize, rng: &mut Rng) -> Result<DirectionSet> {
    illuminate_with(body, s, l, extra_budget, DEFAULT_RETRIES, rng)
}

/// Randomized construction: `s` rotated simplices and `l` rotated cross-polytopes, then
/// one direction `-x̂_i` per vertex left dark, provided at most `extra_budget` are.
pub fn illuminate_with(
    body: &CapBody,
    s: usize,
    l: usize,
    extra_budget: usize,
    retries: usize,
    rng: &mut Rng,
) -> Result<DirectionSet> {
    let n = body.dim();
    if s + l == 0 {
        return Err(domain!("at least one rotated family is required"));
    }
    let simplex = VertexFamily::simplex(n)?;
    let cross = VertexFamily::cross_polytope(n)?;
    let mut fewest_dark = usize::MAX;
    for _ in 0..retries {
        let mut set = DirectionSet::empty(n);
        for k in 0..s {
            push_rotated(&mut set, &simplex, rng, Provenance::Simplex(k))?;
        }
        for k in 0..l {
            push_rotated(&mut set, &cross, rng, Provenance::CrossPolytope(k))?;
        }
        let dark: Vec<usize> =
            lit_vertices(body, &set).iter().enumerate().filter(|(_, &lit)| !lit).map(|(i, _)| i).collect();
        fewest_dark = fewest_dark.min(dark.len());
        if dark.len() > extra_budget {
            continue;
        }
        for i in dark {
            let c = body.center(i);
            set.push(c.iter().map(|v| -v).collect(), Provenance::Vertex(i))?;
        }
        if verify_illumination(body, &set)?.illuminated {
            return Ok(set);
        }
    }
    Err(Error::IlluminationFailed { attempts: retries, uncovered: fewest_dark, budget: extra_budget })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(n: usize, k: usize, sign: f64) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[k] = sign;
        v
    }

    #[test]
    fn body_validation() {
        assert!(CapBody::new(3, vec![vec![2.0, 0.0, 0.0]]).is_ok());
        assert!(CapBody::new(3, vec![vec![0.5, 0.0, 0.0]]).is_err());
        assert!(CapBody::new(3, vec![vec![2.0, 0.0]]).is_err());
        // Two caps of radius π/3 around e1 and e2 overlap.
        let r = core::f64::consts::FRAC_PI_3;
        assert!(CapBody::from_caps(3, &[axis(3, 0, 1.0), axis(3, 1, 1.0)], &[r, r]).is_err());
        let ok = CapBody::from_caps(3, &[axis(3, 0, 1.0), axis(3, 1, 1.0)], &[0.7, 0.7]).unwrap();
        assert!((ok.radius(0) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn cross_polytope_spans_and_fewer_do_not() {
        let n = 4;
        let dirs = generate_points(&VertexFamily::cross_polytope(n).unwrap());
        assert!(positive_hull_spans(&dirs));
        assert!(positive_hull_spans(&generate_points(&VertexFamily::simplex(n).unwrap())));
        // All in a half-space.
        let half: Vec<Vec<f64>> = dirs.iter().filter(|d| d[0] >= 0.0).cloned().collect();
        assert!(!positive_hull_spans(&half));
        // n + 1 vectors in a hyperplane.
        let flat: Vec<Vec<f64>> = (0..n + 2).map(|k| { let mut v = axis(n, k % 3, if k < 3 { 1.0 } else { -1.0 }); v[3] = 0.0; v }).collect();
        assert!(!positive_hull_spans(&flat));
    }

    #[test]
    fn vertex_direction_lights_its_cap() {
        let body = CapBody::from_caps(3, &[axis(3, 0, 1.0)], &[1.2]).unwrap();
        assert!(lit_by(&body, 0, &axis(3, 0, -1.0)));
        assert!(!lit_by(&body, 0, &axis(3, 1, 1.0)));
    }

    #[test]
    fn packing_lemma_small_cases() {
        let cross = generate_points(&VertexFamily::cross_polytope(3).unwrap());
        let (i, j) = check_packing_lemma(&cross).unwrap();
        assert!(dot(&cross[i], &cross[j]) >= 0.0);
        assert!(check_packing_lemma(&cross[..4]).is_err());
    }

    #[test]
    fn illuminate_cross_polytope_body() {
        let n = 4;
        let centers = generate_points(&VertexFamily::cross_polytope(n).unwrap());
        let radii = vec![0.6; centers.len()];
        let body = CapBody::from_caps(n, &centers, &radii).unwrap();
        let mut rng = Rng::new(2024);
        let set = illuminate(&body, 1, 0, body.len(), &mut rng).unwrap();
        assert!(verify_illumination(&body, &set).unwrap().illuminated);
        assert!(set.len() <= 5 + body.len());
    }

    #[test]
    fn illuminate_rejects_empty_families() {
        let body = CapBody::new(3, vec![]).unwrap();
        assert!(illuminate(&body, 0, 0, 0, &mut Rng::new(1)).is_err());
    }
}
