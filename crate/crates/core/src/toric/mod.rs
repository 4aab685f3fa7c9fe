//! Toric log Fano pairs and their monomial valuations.
//!
//! For a complete fan with rays `v_i` and boundary coefficients `c_i`, the
//! moment polytope of `L = -(K + Δ)` is `P = {u : <u, v_i> >= -(1 - c_i)}`.
//! A primitive lattice vector `v` gives the valuation whose volume curve is
//! `n! · vol{u ∈ P : <u, v> >= m_v + x}` with `m_v = min_P <·, v>`.

pub mod linalg;
pub mod polytope;

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{make_report, InvariantReport};
use crate::poly::Polynomial;
use crate::rational::{self, factorial, frac, int, Rational};
use crate::volfun::{PiecewisePolynomial, VolumeCurve};
use linalg::{dot, solve, Point};
pub use polytope::{Halfspace, Polytope, PolytopeView};

/// Highest supported lattice dimension.
pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
    }

    pub fn to_rational(&self) -> Point {
        self.0.iter().map(|&x| int(x)).collect()
    }

    pub fn max_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A complete fan decorated with boundary coefficients, one per ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFanPair")]
pub struct FanPair {
    rays: Vec<LatticeVector>,
    cones: Vec<Vec<usize>>,
    #[serde(with = "rational::serde_vec")]
    coefficients: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawFanPair {
    rays: Vec<LatticeVector>,
    cones: Vec<Vec<usize>>,
    #[serde(default, with = "rational::serde_vec")]
    coefficients: Vec<Rational>,
}

impl TryFrom<RawFanPair> for FanPair {
    type Error = Error;
    fn try_from(raw: RawFanPair) -> Result<Self> {
        let coefficients = if raw.coefficients.is_empty() {
            vec![Rational::zero(); raw.rays.len()]
        } else {
            raw.coefficients
        };
        FanPair::new(raw.rays, raw.cones, coefficients)
    }
}

impl FanPair {
    pub fn new(
        rays: Vec<LatticeVector>,
        cones: Vec<Vec<usize>>,
        coefficients: Vec<Rational>,
    ) -> Result<Self> {
        let dim = rays
            .first()
            .map(LatticeVector::dim)
            .ok_or_else(|| Error::Precondition("fan has no rays".into()))?;
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Unsupported(format!(
                "lattice dimension {dim} (supported: 1..={MAX_DIM})"
            )));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::Precondition(format!(
                    "rays[{i}] has dimension {}, expected {dim}",
                    r.dim()
                )));
            }
            if !r.is_primitive() {
                return Err(Error::Precondition(format!(
                    "rays[{i}] = {r} is not primitive"
                )));
            }
        }
        if coefficients.len() != rays.len() {
            return Err(Error::Precondition(format!(
                "{} coefficients for {} rays",
                coefficients.len(),
                rays.len()
            )));
        }
        for (i, c) in coefficients.iter().enumerate() {
            if c.is_negative() || c >= &Rational::one() {
                return Err(Error::Precondition(format!(
                    "coefficients[{i}] = {c} is not in [0, 1) (klt)"
                )));
            }
        }
        for (k, cone) in cones.iter().enumerate() {
            if cone.is_empty() || cone.iter().any(|&i| i >= rays.len()) {
                return Err(Error::Precondition(format!(
                    "cones[{k}] = {cone:?} has invalid ray indices"
                )));
            }
        }
        if cones.is_empty() {
            return Err(Error::Precondition("fan has no maximal cones".into()));
        }
        Ok(FanPair {
            rays,
            cones,
            coefficients,
        })
    }

    pub fn dim(&self) -> usize {
        self.rays[0].dim()
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn with_coefficients(&self, coefficients: Vec<Rational>) -> Result<Self> {
        FanPair::new(self.rays.clone(), self.cones.clone(), coefficients)
    }

    /// `P^1` with rays `±1`.
    pub fn projective_line() -> Self {
        Self::from_ints(&[&[1], &[-1]], &[&[0], &[1]])
    }

    /// `P^2` with rays `e1, e2, -e1-e2`.
    pub fn projective_plane() -> Self {
        Self::from_ints(&[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
    }

    pub fn p1_x_p1() -> Self {
        Self::from_ints(
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
    }

    /// `P^3` with rays `e1, e2, e3, -e1-e2-e3`.
    pub fn projective_space3() -> Self {
        Self::from_ints(
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
            &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
        )
    }

    fn from_ints(rays: &[&[i64]], cones: &[&[usize]]) -> Self {
        let rays: Vec<_> = rays.iter().map(|r| LatticeVector(r.to_vec())).collect();
        let zeros = vec![Rational::zero(); rays.len()];
        FanPair::new(rays, cones.iter().map(|c| c.to_vec()).collect(), zeros).expect("built-in fan")
    }
}

/// Moment polytope of `-(K + Δ)`, checked to be bounded, full-dimensional and
/// to have the input fan as its normal fan (i.e. `-(K + Δ)` is ample).
pub fn moment_polytope(fp: &FanPair) -> Result<Polytope> {
    let halfspaces = fp
        .rays
        .iter()
        .zip(&fp.coefficients)
        .map(|(r, c)| Halfspace::new(r.to_rational(), Rational::one() - c))
        .collect();
    let p = Polytope::new(fp.dim(), halfspaces).map_err(|e| Error::NotLogFano(e.to_string()))?;
    let mut cones: Vec<Vec<usize>> = fp
        .cones
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    cones.sort();
    let mut tight: Vec<Vec<usize>> = p.vertices().iter().map(|u| p.tight_set(u)).collect();
    tight.sort();
    if tight != cones {
        return Err(Error::NotLogFano(format!(
            "normal fan of the polytope has cones {tight:?}, input fan has {cones:?}"
        )));
    }
    Ok(p)
}

/// `(L^n) = n! · vol(P)`
pub fn top_self_intersection(p: &Polytope) -> Rational {
    factorial(p.dim()) * p.volume()
}

/// `A(v)`: the function linear on each cone with `A(v_i) = 1 - c_i`.
pub fn toric_log_discrepancy(fp: &FanPair, v: &LatticeVector) -> Result<Rational> {
    if v.dim() != fp.dim() || v.is_zero() {
        return Err(Error::Precondition(format!(
            "valuation {v} must be a nonzero vector of dimension {}",
            fp.dim()
        )));
    }
    let target = v.to_rational();
    let mut non_simplicial = None;
    for cone in &fp.cones {
        if cone.len() != fp.dim() {
            non_simplicial.get_or_insert_with(|| cone.clone());
            continue;
        }
        // columns are the cone's rays
        let a: Vec<Vec<Rational>> = (0..fp.dim())
            .map(|row| cone.iter().map(|&i| int(fp.rays[i].0[row])).collect())
            .collect();
        let Some(lambda) = solve(&a, &target) else {
            non_simplicial.get_or_insert_with(|| cone.clone());
            continue;
        };
        if lambda.iter().all(|l| !l.is_negative()) {
            return Ok(cone
                .iter()
                .zip(&lambda)
                .fold(Rational::zero(), |acc, (&i, l)| {
                    acc + l * (Rational::one() - &fp.coefficients[i])
                }));
        }
    }
    match non_simplicial {
        Some(cone) => Err(Error::NonSimplicial(cone)),
        None => Err(Error::Precondition(format!(
            "{v} lies in no cone; fan is not complete"
        ))),
    }
}

/// `n! · vol{u ∈ P : <u, v> >= level}`
fn slice_volume(p: &Polytope, v: &Point, level: &Rational) -> Rational {
    match p.clip(Halfspace::new(v.clone(), -level.clone())) {
        Some(q) => factorial(p.dim()) * q.volume(),
        None => Rational::zero(),
    }
}

/// Exact volume curve of the monomial valuation `v`.
///
/// Between consecutive values of `<vertex, v> - m_v` the slice volume is a
/// polynomial of degree at most `n`; each piece is recovered by interpolating
/// `n + 1` exact slice volumes and confirmed at one further node.
pub fn toric_volume_curve(p: &Polytope, v: &LatticeVector) -> Result<VolumeCurve> {
    if v.dim() != p.dim() || !v.is_primitive() {
        return Err(Error::Precondition(format!(
            "valuation {v} must be primitive of dimension {}",
            p.dim()
        )));
    }
    let w = v.to_rational();
    let (m, _) = p.linear_range(&w);
    let mut breaks: Vec<Rational> = p.vertices().iter().map(|u| dot(u, &w) - &m).collect();
    breaks.sort();
    breaks.dedup();
    let n = p.dim() as i64;
    let mut pieces = Vec::with_capacity(breaks.len() - 1);
    for seg in breaks.windows(2) {
        let (a, b) = (&seg[0], &seg[1]);
        let at = |t: Rational| {
            let x = a + (b - a) * t;
            let y = slice_volume(p, &w, &(&m + &x));
            (x, y)
        };
        let nodes: Vec<_> = (0..=n).map(|j| at(frac(j, n))).collect();
        let piece = Polynomial::interpolate(&nodes);
        let (cx, cy) = at(frac(1, n + 2));
        if piece.eval(&cx) != cy {
            return Err(Error::Consistency(format!(
                "slice volume on [{a}, {b}] is not polynomial of degree <= {n}"
            )));
        }
        pieces.push(piece);
    }
    VolumeCurve::new(PiecewisePolynomial::new(breaks, pieces)?, p.dim())
}

/// `β = L^n · (A(v) - <barycenter, v> + m_v)`.
pub fn toric_beta(fp: &FanPair, v: &LatticeVector) -> Result<Rational> {
    let p = moment_polytope(fp)?;
    barycenter_beta(fp, &p, v)
}

fn barycenter_beta(fp: &FanPair, p: &Polytope, v: &LatticeVector) -> Result<Rational> {
    let a = toric_log_discrepancy(fp, v)?;
    let w = v.to_rational();
    let (m, _) = p.linear_range(&w);
    Ok(top_self_intersection(p) * (a - dot(&p.barycenter(), &w) + m))
}

#[derive(Debug, Clone, Serialize)]
pub struct ToricEvaluation {
    pub v: LatticeVector,
    pub report: InvariantReport,
    #[serde(with = "rational::serde_str")]
    pub beta_barycenter: Rational,
    pub curve: VolumeCurve,
}

/// Invariants of `v` by the curve-integral route, cross-checked against the
/// barycenter route.
pub fn toric_evaluate(fp: &FanPair, p: &Polytope, v: &LatticeVector) -> Result<ToricEvaluation> {
    let curve = toric_volume_curve(p, v)?;
    let a = toric_log_discrepancy(fp, v)?;
    let report = make_report(p.dim(), &top_self_intersection(p), &a, &curve)?;
    let beta_barycenter = barycenter_beta(fp, p, v)?;
    if beta_barycenter != report.beta {
        return Err(Error::Consistency(format!(
            "beta for {v}: barycenter route {beta_barycenter}, integral route {}",
            report.beta
        )));
    }
    Ok(ToricEvaluation {
        v: v.clone(),
        report,
        beta_barycenter,
        curve,
    })
}

/// `#{u ∈ kP ∩ Z^n : <u, v> >= k m_v + k x}`, the dimension of the space of
/// sections of `kL` vanishing to order at least `kx` along `v`.
pub fn lattice_section_count(p: &Polytope, v: &LatticeVector, k: u32, x: &Rational) -> Result<u64> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let kq = int(k as i64);
    let mut rows: Vec<(Vec<i64>, i64)> = Vec::new();
    for (i, h) in p.halfspaces().iter().enumerate() {
        let normal: Option<Vec<i64>> = h
            .normal
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer().to_i64()).flatten())
            .collect();
        let off = &h.offset * &kq;
        let (Some(normal), true) = (normal, off.is_integer()) else {
            return Err(Error::Precondition(format!(
                "halfspace {i}: k = {k} does not make the normal and k·offset integral"
            )));
        };
        rows.push((normal, off.to_integer().to_i64().expect("offset fits i64")));
    }
    let w = v.to_rational();
    let (m, _) = p.linear_range(&w);
    let threshold = ((&m + x) * &kq)
        .ceil()
        .to_integer()
        .to_i64()
        .expect("threshold fits i64");
    let dim = p.dim();
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for u in p.vertices() {
        for i in 0..dim {
            let s = &u[i] * &kq;
            lo[i] = lo[i].min(s.floor().to_integer().to_i64().unwrap());
            hi[i] = hi[i].max(s.ceil().to_integer().to_i64().unwrap());
        }
    }
    let mut count = 0u64;
    let mut u = lo.clone();
    'outer: loop {
        let inside = rows
            .iter()
            .all(|(nrm, off)| nrm.iter().zip(&u).map(|(a, b)| a * b).sum::<i64>() + off >= 0);
        if inside && v.0.iter().zip(&u).map(|(a, b)| a * b).sum::<i64>() >= threshold {
            count += 1;
        }
        for i in 0..dim {
            if u[i] < hi[i] {
                u[i] += 1;
                continue 'outer;
            }
            u[i] = lo[i];
        }
        break;
    }
    Ok(count)
}

/// `n! · count / k^n`, the lattice estimate of `vol(L - xF_v)`.
pub fn lattice_volume_estimate(
    p: &Polytope,
    v: &LatticeVector,
    k: u32,
    x: &Rational,
) -> Result<Rational> {
    let count = lattice_section_count(p, v, k, x)?;
    let kn = rational::pow(&int(k as i64), p.dim() as u32);
    Ok(factorial(p.dim()) * int(count as i64) / kn)
}

#[derive(Debug, Clone, Serialize)]
pub struct ToricSweep {
    pub radius: i64,
    /// Sorted by β̂ ascending; the first entry is the minimum.
    pub entries: Vec<ToricEvaluation>,
}

impl ToricSweep {
    pub fn minimum(&self) -> &ToricEvaluation {
        &self.entries[0]
    }
}

/// All primitive `v` with `‖v‖_∞ <= radius`, in lexicographic order.
pub fn primitive_vectors(dim: usize, radius: i64) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    let mut u = vec![-radius; dim];
    'outer: loop {
        let v = LatticeVector(u.clone());
        if v.is_primitive() {
            out.push(v);
        }
        for i in (0..dim).rev() {
            if u[i] < radius {
                u[i] += 1;
                continue 'outer;
            }
            u[i] = -radius;
        }
        break;
    }
    out
}

/// Monomial-valuation evidence sweep. Non-toric valuations are not covered,
/// so a nonnegative minimum here is evidence, not a proof.
pub fn toric_sweep(fp: &FanPair, radius: i64) -> Result<ToricSweep> {
    if radius < 1 {
        return Err(Error::Precondition(format!("radius {radius} must be >= 1")));
    }
    let p = moment_polytope(fp)?;
    let vs = primitive_vectors(fp.dim(), radius);
    log::debug!("sweeping {} primitive vectors at radius {radius}", vs.len());
    let mut entries = vs
        .par_iter()
        .map(|v| toric_evaluate(fp, &p, v))
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| match a.report.betahat.cmp(&b.report.betahat) {
        Ordering::Equal => a.v.cmp(&b.v),
        o => o,
    });
    Ok(ToricSweep { radius, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::volfun::{
        check_fujita_lower, check_log_concavity, check_tau_upper, concavity_triples, linear_curve,
    };

    fn lv(xs: &[i64]) -> LatticeVector {
        LatticeVector(xs.to_vec())
    }

    fn pt(xs: &[i64]) -> Point {
        xs.iter().map(|&x| int(x)).collect()
    }

    /// Independent slice-area oracle for polygons: shoelace formula on the
    /// polygon clipped by Sutherland–Hodgman against `<u, w> >= level`.
    fn shoelace_slice(poly: &[(Rational, Rational)], w: (i64, i64), level: &Rational) -> Rational {
        let f = |p: &(Rational, Rational)| &p.0 * int(w.0) + &p.1 * int(w.1) - level;
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        for i in 0..poly.len() {
            let (a, b) = (&poly[i], &poly[(i + 1) % poly.len()]);
            let (fa, fb) = (f(a), f(b));
            if !fa.is_negative() {
                out.push(a.clone());
            }
            if (fa.is_negative() && fb.is_positive()) || (fa.is_positive() && fb.is_negative()) {
                let t = &fa / (&fa - &fb);
                out.push((&a.0 + &t * (&b.0 - &a.0), &a.1 + &t * (&b.1 - &a.1)));
            }
        }
        let n = out.len();
        let twice = (0..n).fold(Rational::zero(), |acc, i| {
            let (p, q) = (&out[i], &out[(i + 1) % n]);
            acc + &p.0 * &q.1 - &q.0 * &p.1
        });
        twice.abs() / int(2)
    }

    fn p2_triangle() -> Vec<(Rational, Rational)> {
        vec![(int(-1), int(-1)), (int(2), int(-1)), (int(-1), int(2))]
    }

    #[test]
    fn moment_polytope_examples() {
        let p2 = moment_polytope(&FanPair::projective_plane()).unwrap();
        assert_eq!(p2.vertices(), &[pt(&[-1, -1]), pt(&[-1, 2]), pt(&[2, -1])]);
        let p1 = moment_polytope(&FanPair::projective_line()).unwrap();
        assert_eq!(p1.vertices(), &[pt(&[-1]), pt(&[1])]);
        let sq = moment_polytope(&FanPair::p1_x_p1()).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert!(sq
            .vertices()
            .iter()
            .all(|u| u.iter().all(|c| c.abs() == int(1))));
    }

    #[test]
    fn moment_polytope_rejects_bad_fans() {
        // only two rays in the plane: unbounded
        let half = FanPair::new(
            vec![lv(&[1, 0]), lv(&[0, 1])],
            vec![vec![0, 1]],
            vec![int(0), int(0)],
        )
        .unwrap();
        assert!(matches!(moment_polytope(&half), Err(Error::NotLogFano(_))));
        // P^2 rays but the cone list of a different fan
        let wrong = FanPair::new(
            FanPair::projective_plane().rays().to_vec(),
            vec![vec![0, 1], vec![1, 2]],
            vec![int(0); 3],
        )
        .unwrap();
        assert!(matches!(moment_polytope(&wrong), Err(Error::NotLogFano(_))));
        // Hirzebruch F_3 has -K not ample
        let f3 = FanPair::new(
            vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, 3]), lv(&[0, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
            vec![int(0); 4],
        )
        .unwrap();
        assert!(matches!(moment_polytope(&f3), Err(Error::NotLogFano(_))));
    }

    #[test]
    fn fan_validation() {
        assert!(FanPair::new(vec![lv(&[2, 0])], vec![vec![0]], vec![int(0)]).is_err());
        assert!(FanPair::new(vec![lv(&[1])], vec![vec![0]], vec![int(1)]).is_err());
        assert!(FanPair::new(vec![lv(&[1])], vec![vec![3]], vec![int(0)]).is_err());
        assert!(matches!(
            FanPair::new(vec![lv(&[1, 0, 0, 0])], vec![vec![0]], vec![int(0)]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn volume_and_barycenter_examples() {
        let p2 = moment_polytope(&FanPair::projective_plane()).unwrap();
        assert_eq!(p2.volume(), frac(9, 2));
        assert_eq!(top_self_intersection(&p2), int(9));
        assert_eq!(p2.barycenter(), pt(&[0, 0]));
        let sq = moment_polytope(&FanPair::p1_x_p1()).unwrap();
        assert_eq!((sq.volume(), sq.barycenter()), (int(4), pt(&[0, 0])));
        let p3 = moment_polytope(&FanPair::projective_space3()).unwrap();
        assert_eq!(top_self_intersection(&p3), int(64));
    }

    #[test]
    fn log_discrepancy_examples() {
        let fp = FanPair::projective_plane();
        assert_eq!(toric_log_discrepancy(&fp, &lv(&[1, 1])).unwrap(), int(2));
        assert_eq!(toric_log_discrepancy(&fp, &lv(&[2, 1])).unwrap(), int(3));
        assert_eq!(toric_log_discrepancy(&fp, &lv(&[1, 0])).unwrap(), int(1));
        // (-2,-1) = 1·(0,1) + 2·(-1,-1)
        assert_eq!(toric_log_discrepancy(&fp, &lv(&[-2, -1])).unwrap(), int(3));
        assert!(toric_log_discrepancy(&fp, &lv(&[0, 0])).is_err());
        // square described as a single non-simplicial cone list
        let quad = FanPair::new(
            FanPair::p1_x_p1().rays().to_vec(),
            vec![vec![0, 1, 2, 3]],
            vec![int(0); 4],
        )
        .unwrap();
        assert!(matches!(
            toric_log_discrepancy(&quad, &lv(&[1, 1])),
            Err(Error::NonSimplicial(_))
        ));
    }

    #[test]
    fn volume_curve_examples() {
        let p2 = moment_polytope(&FanPair::projective_plane()).unwrap();
        let line = toric_volume_curve(&p2, &lv(&[1, 0])).unwrap();
        assert_eq!(line.tau(), &int(3));
        let expected =
            PiecewisePolynomial::single(int(0), int(3), Polynomial::linear(int(3), int(-1)).pow(2))
                .unwrap();
        assert!(line.body().same_function(&expected));

        let diag = toric_volume_curve(&p2, &lv(&[1, 1])).unwrap();
        assert_eq!(diag.tau(), &int(3));
        let expected = PiecewisePolynomial::single(
            int(0),
            int(3),
            Polynomial::new(vec![int(9), int(0), int(-1)]),
        )
        .unwrap();
        assert!(diag.body().same_function(&expected));

        let p1 = moment_polytope(&FanPair::projective_line()).unwrap();
        let seg = toric_volume_curve(&p1, &lv(&[1])).unwrap();
        assert_eq!(seg, linear_curve(&int(2)).unwrap());
    }

    #[test]
    fn slice_volumes_match_shoelace_oracle() {
        let p2 = moment_polytope(&FanPair::projective_plane()).unwrap();
        for w in [(1, 0), (1, 1), (2, 1), (3, -2), (-1, 4)] {
            let v = lv(&[w.0, w.1]);
            let curve = toric_volume_curve(&p2, &v).unwrap();
            let (m, _) = p2.linear_range(&v.to_rational());
            for x in curve.uniform_grid(7) {
                let oracle = int(2) * shoelace_slice(&p2_triangle(), w, &(&m + &x));
                assert_eq!(curve.value(&x).unwrap(), oracle, "v = {v}, x = {x}");
            }
        }
    }

    #[test]
    fn beta_examples() {
        let p2 = FanPair::projective_plane();
        assert_eq!(toric_beta(&p2, &lv(&[1, 0])).unwrap(), int(0));
        for (a, b) in [(1, 1), (2, 1), (3, 2), (5, 3)] {
            assert_eq!(toric_beta(&p2, &lv(&[a, b])).unwrap(), int(0));
        }
        assert_eq!(
            toric_beta(&FanPair::p1_x_p1(), &lv(&[1, 0])).unwrap(),
            int(0)
        );
        let shifted = FanPair::p1_x_p1()
            .with_coefficients(vec![frac(1, 2), int(0), int(0), int(0)])
            .unwrap();
        assert!(toric_beta(&shifted, &lv(&[1, 0])).unwrap().is_negative());
    }

    #[test]
    fn barycenter_route_matches_integral_route() {
        let fans = [
            FanPair::projective_plane(),
            FanPair::p1_x_p1(),
            FanPair::p1_x_p1()
                .with_coefficients(vec![frac(1, 2), int(0), frac(1, 3), int(0)])
                .unwrap(),
            FanPair::projective_plane()
                .with_coefficients(vec![frac(1, 4), int(0), int(0)])
                .unwrap(),
        ];
        for fp in &fans {
            let p = moment_polytope(fp).unwrap();
            for v in primitive_vectors(2, 3) {
                let e = toric_evaluate(fp, &p, &v).unwrap();
                assert_eq!(e.beta_barycenter, e.report.beta);
                assert!(e.report.j_identity_holds());
            }
        }
    }

    #[test]
    fn curves_pass_inequality_checks() {
        let p = moment_polytope(&FanPair::p1_x_p1()).unwrap();
        for v in primitive_vectors(2, 2) {
            let c = toric_volume_curve(&p, &v).unwrap();
            assert!(check_tau_upper(&c));
            assert!(check_fujita_lower(&c, &c.uniform_grid(9)).unwrap());
            assert!(check_log_concavity(&c, &concavity_triples(&c, 5)).unwrap());
        }
    }

    #[test]
    fn three_dimensional_curve() {
        let fp = FanPair::projective_space3();
        let p = moment_polytope(&fp).unwrap();
        let c = toric_volume_curve(&p, &lv(&[1, 0, 0])).unwrap();
        // (4 - x)^3 on [0, 4]
        let expected =
            PiecewisePolynomial::single(int(0), int(4), Polynomial::linear(int(4), int(-1)).pow(3))
                .unwrap();
        assert!(c.body().same_function(&expected));
        let e = toric_evaluate(&fp, &p, &lv(&[1, 1, 0])).unwrap();
        assert_eq!(e.report.beta, int(0));
        assert!(check_log_concavity(&e.curve, &concavity_triples(&e.curve, 3)).unwrap());
    }

    #[test]
    fn lattice_counts() {
        let p2 = moment_polytope(&FanPair::projective_plane()).unwrap();
        assert_eq!(
            lattice_section_count(&p2, &lv(&[1, 0]), 1, &int(0)).unwrap(),
            10
        );
        assert_eq!(
            lattice_section_count(&p2, &lv(&[1, 0]), 1, &int(3)).unwrap(),
            1
        );
        assert_eq!(
            lattice_section_count(&p2, &lv(&[1, 0]), 2, &frac(7, 2)).unwrap(),
            0
        );
        // k = 30, x = 1: sum_{j=1}^{61} j
        assert_eq!(
            lattice_section_count(&p2, &lv(&[1, 0]), 30, &int(1)).unwrap(),
            1891
        );
        let est = lattice_volume_estimate(&p2, &lv(&[1, 0]), 30, &int(1)).unwrap();
        let err = ((est - int(4)) / int(4)).abs();
        assert!(err < frac(1, 10));

        let shifted = FanPair::projective_plane()
            .with_coefficients(vec![frac(1, 2), int(0), int(0)])
            .unwrap();
        let q = moment_polytope(&shifted).unwrap();
        assert!(lattice_section_count(&q, &lv(&[1, 0]), 1, &int(0)).is_err());
        assert!(lattice_section_count(&q, &lv(&[1, 0]), 2, &int(0)).is_ok());
    }

    #[test]
    fn sweep_examples() {
        let s = toric_sweep(&FanPair::projective_plane(), 5).unwrap();
        assert!(s.entries.iter().all(|e| e.report.betahat.is_zero()));
        let s1 = toric_sweep(&FanPair::projective_line(), 1).unwrap();
        assert_eq!(s1.entries.len(), 2);
        assert!(s1
            .entries
            .iter()
            .all(|e| e.report.tau == int(2) && e.report.betahat.is_zero()));

        let base = toric_sweep(&FanPair::p1_x_p1(), 3).unwrap();
        let shifted = FanPair::p1_x_p1()
            .with_coefficients(vec![frac(1, 2), int(0), int(0), int(0)])
            .unwrap();
        let s = toric_sweep(&shifted, 3).unwrap();
        assert!(s.minimum().report.betahat < base.minimum().report.betahat);
        assert!(s
            .entries
            .windows(2)
            .all(|w| w[0].report.betahat <= w[1].report.betahat));
        assert!(toric_sweep(&shifted, 0).is_err());
    }
}
