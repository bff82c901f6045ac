//! The dilogarithm volume formulas.
//!
//! For parameters `a1..a6` the function
//!
//! ```text
//! U(z) = Li2(z) + Li2(a1a2a4a5 z) + Li2(a1a3a4a6 z) + Li2(a2a3a5a6 z)
//!      - Li2(-a1a2a3 z) - Li2(-a1a5a6 z) - Li2(-a2a4a6 z) - Li2(-a3a4a5 z)
//! ```
//!
//! has two nontrivial critical points `z-`, `z+` (the roots of
//! `q2 z² + q1 z + q0`), and
//!
//! ```text
//! V = (i/4) [ (U(z-) - z-U'(z-) log z-) - (U(z+) - z+U'(z+) log z+) ].
//! ```
//!
//! With `a_k = exp(i A_k)` the volume of a hyperbolic tetrahedron is `-V`;
//! with `a = (-e^{l4}, -e^{l5}, -e^{l6}, -e^{l1}, -e^{l2}, -e^{l3})` it is
//! `V - Σ l_i ∂V/∂l_i`.
//!
//! All evaluations go through [`Tracker`], which holds every dilogarithm and
//! logarithm term as an analytic continuation. A tracker that has not moved
//! sits on the principal branches ([`v_eval`]); one moved along a path from a
//! reference tetrahedron carries the continued branches ([`v_eval_tracked`]).

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::dilog::{clog, li2, Complex, DilogError, Li2Continuation, LogContinuation};
use crate::gram::{
    check_lengths, classify, gram_from_angles, gram_from_lengths, lengths_to_angles, Angles6,
    GramError, Lengths6, Shape,
};
use crate::tolerance::{
    ANGLE_IMAG, CONGRUENCE, FD_STEP, PARTIAL_AGREEMENT, PARTIAL_COSET, RESIDUE_REAL, RESIDUE_SNAP,
    V_REAL_REL,
};

const I: Complex = Complex::new(0.0, 1.0);
const TWO_PI: f64 = 2.0 * PI;

/// Parameter slots (0-based) multiplied into each of the eight terms of `U`,
/// with the term's sign. Negative terms also negate their coefficient.
const TERMS: [(f64, &[usize]); 8] = [
    (1.0, &[]),
    (1.0, &[0, 1, 3, 4]),
    (1.0, &[0, 2, 3, 5]),
    (1.0, &[1, 2, 4, 5]),
    (-1.0, &[0, 1, 2]),
    (-1.0, &[0, 4, 5]),
    (-1.0, &[1, 3, 5]),
    (-1.0, &[2, 3, 4]),
];

/// Parameter slot carrying `-e^{l_i}`.
pub const LENGTH_SLOT: [usize; 6] = [3, 4, 5, 0, 1, 2];

/// Index pairs of opposite edges and the four face triples, in edge indices.
const OPPOSITE: [(usize, usize); 3] = [(0, 3), (1, 4), (2, 5)];
const FACE_TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 4, 5], [1, 3, 5], [2, 3, 4]];

/// Relative size of the nudge applied to an interior path node that lands on
/// a branch point.
const PATH_NUDGE: f64 = 1e-9;

/// Angle offset above the Euclidean regular tetrahedron for the reference
/// point of spherical continuations.
const SPHERICAL_REFERENCE_OFFSET: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VolumeError {
    #[error(transparent)]
    Gram(#[from] GramError),
    #[error(transparent)]
    Dilog(#[from] DilogError),
    #[error("degenerate quadratic, q2 = {0}")]
    DegenerateQuadratic(Complex),
    #[error("branch integrity check `{check}` failed: {value:e} exceeds {limit:e}")]
    BranchIntegrity {
        check: &'static str,
        value: f64,
        limit: f64,
    },
    #[error("continuation path leaves the {0} region")]
    PathLeavesRegion(Shape),
    #[error("continuation step size underflow")]
    PathStall,
    #[error("parameters of different origin cannot be joined by a path")]
    OriginMismatch,
}

/// Where a parameter set came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Origin {
    Angles(Angles6),
    Lengths(Lengths6),
    Formal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexParams {
    pub a: [Complex; 6],
    pub origin: Origin,
}

impl ComplexParams {
    /// Arbitrary nonzero parameters with no geometric origin.
    pub fn formal(a: [Complex; 6]) -> Self {
        Self {
            a,
            origin: Origin::Formal,
        }
    }

    /// Sign and Li2-argument coefficient of each term of `U`.
    pub fn terms(&self) -> [(f64, Complex); 8] {
        TERMS.map(|(s, mask)| {
            let prod = mask
                .iter()
                .fold(Complex::new(1.0, 0.0), |p, &k| p * self.a[k]);
            (s, if s > 0.0 { prod } else { -prod })
        })
    }
}

pub fn params_from_angles(a: &Angles6) -> ComplexParams {
    ComplexParams {
        a: a.values().map(|x| Complex::from_polar(1.0, x)),
        origin: Origin::Angles(*a),
    }
}

pub fn params_from_lengths(l: &Lengths6) -> ComplexParams {
    let l = l.values();
    let mut a = [Complex::new(0.0, 0.0); 6];
    for (i, &slot) in LENGTH_SLOT.iter().enumerate() {
        a[slot] = Complex::new(-l[i].exp(), 0.0);
    }
    ComplexParams {
        a,
        origin: Origin::Lengths(Lengths6::new(l).expect("validated lengths")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadCoeffs {
    pub q0: Complex,
    pub q1: Complex,
    pub q2: Complex,
}

impl QuadCoeffs {
    pub fn eval(&self, z: Complex) -> Complex {
        (self.q2 * z + self.q1) * z + self.q0
    }

    pub fn scale(&self) -> f64 {
        self.q0.norm() + self.q1.norm() + self.q2.norm()
    }

    /// `|q(z)| / (|q0| + |q1| + |q2|)`.
    pub fn relative_residual(&self, z: Complex) -> f64 {
        self.eval(z).norm() / self.scale()
    }
}

pub fn quad_coeffs(p: &ComplexParams) -> QuadCoeffs {
    let [a1, a2, a3, a4, a5, a6] = p.a;
    let prod = a1 * a2 * a3 * a4 * a5 * a6;
    let q0 = 1.0
        + a1 * a2 * a3
        + a1 * a5 * a6
        + a2 * a4 * a6
        + a3 * a4 * a5
        + a1 * a2 * a4 * a5
        + a1 * a3 * a4 * a6
        + a2 * a3 * a5 * a6;
    let q1 = -prod
        * ((a1 - a1.inv()) * (a4 - a4.inv())
            + (a2 - a2.inv()) * (a5 - a5.inv())
            + (a3 - a3.inv()) * (a6 - a6.inv()));
    let q2 = prod
        * (a1 * a4
            + a2 * a5
            + a3 * a6
            + a1 * a2 * a6
            + a1 * a3 * a5
            + a2 * a3 * a4
            + a4 * a5 * a6
            + prod);
    QuadCoeffs { q0, q1, q2 }
}

/// The two roots `z-`, `z+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZPair {
    pub z_minus: Complex,
    pub z_plus: Complex,
    /// `q1² - 4 q0 q2`.
    pub discriminant: Complex,
    /// The quadratic-formula roots, ordered to match `z_minus`, `z_plus`.
    pub quadratic_minus: Complex,
    pub quadratic_plus: Complex,
    /// True when the principal square root of the discriminant produced the
    /// roots in the opposite order.
    pub swapped: bool,
}

impl ZPair {
    pub fn roots(&self) -> [Complex; 2] {
        [self.z_minus, self.z_plus]
    }

    /// Largest distance between the quadratic-formula roots and the reported
    /// ones, relative to the larger root modulus.
    pub fn quadratic_gap(&self) -> f64 {
        let scale = self
            .z_minus
            .norm()
            .max(self.z_plus.norm())
            .max(f64::MIN_POSITIVE);
        (self.quadratic_minus - self.z_minus)
            .norm()
            .max((self.quadratic_plus - self.z_plus).norm())
            / scale
    }
}

/// `(-q1 ∓ sqrt(q1² - 4 q0 q2)) / (2 q2)` with the principal square root.
pub fn quadratic_roots(q: &QuadCoeffs) -> Result<(Complex, Complex), VolumeError> {
    if q.q2.norm() <= f64::EPSILON * q.scale() || q.q2.norm() == 0.0 {
        return Err(VolumeError::DegenerateQuadratic(q.q2));
    }
    let d = (q.q1 * q.q1 - 4.0 * q.q0 * q.q2).sqrt();
    Ok(((-q.q1 - d) / (2.0 * q.q2), (-q.q1 + d) / (2.0 * q.q2)))
}

/// `sqrt(det G)` as it enters the closed-form roots: `+i sqrt(-det G)` for
/// negative determinants and `-sqrt(det G)` otherwise.
fn pinned_sqrt(det: f64) -> Complex {
    if det >= 0.0 {
        Complex::new(-det.sqrt(), 0.0)
    } else {
        Complex::new(0.0, (-det).sqrt())
    }
}

/// Elementary symmetric polynomials `e_0..e_6` of six values.
fn elementary_symmetric(y: &[f64; 6]) -> [f64; 7] {
    let mut e = [0.0; 7];
    e[0] = 1.0;
    for (n, &v) in y.iter().enumerate() {
        for k in (1..=n + 1).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e
}

/// Normalizer of the length closed form,
/// `Σ_opp e^{l_i+l_j} - Σ_faces e^{l_i+l_j+l_k} + e^{Σ l}`, expanded in
/// `y = e^l - 1`.
pub fn length_normalizer(l: &Lengths6) -> f64 {
    let y = l.values().map(f64::exp_m1);
    let opposite: f64 = OPPOSITE.iter().map(|&(i, j)| y[i] * y[j]).sum();
    let faces: f64 = FACE_TRIPLES
        .iter()
        .map(|&[i, j, k]| y[i] * y[j] + y[i] * y[k] + y[j] * y[k] + y[i] * y[j] * y[k])
        .sum();
    let e = elementary_symmetric(&y);
    opposite - faces + e[2..].iter().sum::<f64>()
}

/// Normalizer of the angle closed form, `q2 / (a1⋯a6)`.
pub fn angle_normalizer(a: &Angles6) -> Complex {
    let a = a.values();
    let e = |idx: &[usize]| Complex::from_polar(1.0, idx.iter().map(|&k| a[k]).sum());
    e(&[0, 3])
        + e(&[1, 4])
        + e(&[2, 5])
        + e(&[0, 1, 5])
        + e(&[0, 2, 4])
        + e(&[1, 2, 3])
        + e(&[3, 4, 5])
        + e(&[0, 1, 2, 3, 4, 5])
}

/// Roots from the Gram-determinant closed forms, `(z-, z+)`; `None` for
/// formal parameters.
pub fn closed_form_roots(p: &ComplexParams) -> Option<(Complex, Complex)> {
    match &p.origin {
        Origin::Angles(a) => {
            let v = a.values();
            let s: f64 = OPPOSITE.iter().map(|&(i, j)| v[i].sin() * v[j].sin()).sum();
            let d = pinned_sqrt(gram_from_angles(a).det());
            let k = -2.0 / angle_normalizer(a);
            Some((k * (s - d), k * (s + d)))
        }
        Origin::Lengths(l) => {
            let v = l.values();
            let s: f64 = OPPOSITE
                .iter()
                .map(|&(i, j)| v[i].sinh() * v[j].sinh())
                .sum();
            let d = pinned_sqrt(gram_from_lengths(l).det());
            let k = 2.0 / length_normalizer(l);
            Some((k * (s - d), k * (s + d)))
        }
        Origin::Formal => None,
    }
}

/// Roots of the quadratic, labeled `z-`/`z+` by agreement with the closed
/// form. The reported values are the closed-form ones, which stay accurate
/// where the discriminant cancels; the quadratic-formula values are kept
/// alongside.
pub fn z_roots(q: &QuadCoeffs, p: &ComplexParams) -> Result<ZPair, VolumeError> {
    let (r0, r1) = quadratic_roots(q)?;
    let discriminant = q.q1 * q.q1 - 4.0 * q.q0 * q.q2;
    let Some((cm, cp)) = closed_form_roots(p) else {
        return Ok(ZPair {
            z_minus: r0,
            z_plus: r1,
            discriminant,
            quadratic_minus: r0,
            quadratic_plus: r1,
            swapped: false,
        });
    };
    let swapped = (r0 - cm).norm() + (r1 - cp).norm() > (r1 - cm).norm() + (r0 - cp).norm();
    let (qm, qp) = if swapped { (r1, r0) } else { (r0, r1) };
    Ok(ZPair {
        z_minus: cm,
        z_plus: cp,
        discriminant,
        quadratic_minus: qm,
        quadratic_plus: qp,
        swapped,
    })
}

fn check_not_one(w: Complex) -> Result<(), VolumeError> {
    if w == Complex::new(1.0, 0.0) {
        Err(DilogError::BranchPoint(w).into())
    } else {
        Ok(())
    }
}

/// `U(z)` on principal branches.
pub fn u_eval(p: &ComplexParams, z: Complex) -> Result<Complex, VolumeError> {
    let mut sum = Complex::new(0.0, 0.0);
    for (s, c) in p.terms() {
        let w = c * z;
        check_not_one(w)?;
        sum += s * li2(w);
    }
    Ok(sum)
}

/// `z ∂U/∂z = -Σ s log(1 - c z)` on principal branches.
pub fn zdudz(p: &ComplexParams, z: Complex) -> Result<Complex, VolumeError> {
    let mut sum = Complex::new(0.0, 0.0);
    for (s, c) in p.terms() {
        sum -= s * clog(1.0 - c * z)?;
    }
    Ok(sum)
}

/// Rounding bound on `z ∂U/∂z` at `z`: each `log(1 - w)` is off by about
/// `ε (1 + |w|) / |1 - w|`, which dominates when a root nears a branch point
/// (ideal vertices).
pub fn log_rounding_bound(p: &ComplexParams, z: Complex) -> f64 {
    p.terms()
        .iter()
        .map(|&(_, c)| {
            let w = c * z;
            4.0 * f64::EPSILON * (1.0 + w.norm()) / (1.0 - w).norm()
        })
        .sum()
}

/// Branch residues of `z ∂U/∂z` at the two roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residues {
    /// `k` with `z ∂U/∂z ≈ 2πi k` at `z-` and `z+`.
    pub k: (i64, i64),
    /// Largest distance of an imaginary part from its `2π` multiple.
    pub snap: f64,
    /// Largest real part.
    pub real: f64,
    /// Rounding bound added to both tolerances.
    pub allowance: f64,
}

impl Residues {
    pub fn from_values(values: [Complex; 2], allowance: f64) -> Self {
        let k = values.map(|v| (v.im / TWO_PI).round());
        let snap = (0..2)
            .map(|j| (values[j].im - TWO_PI * k[j]).abs())
            .fold(0.0, f64::max);
        let real = values.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
        Self {
            k: (k[0] as i64, k[1] as i64),
            snap,
            real,
            allowance,
        }
    }

    pub fn check(&self) -> Result<(i64, i64), VolumeError> {
        limit_check("residue_snap", self.snap, RESIDUE_SNAP + self.allowance)?;
        limit_check("residue_real", self.real, RESIDUE_REAL + self.allowance)?;
        Ok(self.k)
    }
}

/// Integers `k` with `z ∂U/∂z = 2πi k` at `z-` and `z+` (principal branches).
pub fn branch_residues(p: &ComplexParams, zp: &ZPair) -> Result<(i64, i64), VolumeError> {
    let allowance = log_rounding_bound(p, zp.z_minus).max(log_rounding_bound(p, zp.z_plus));
    Residues::from_values([zdudz(p, zp.z_minus)?, zdudz(p, zp.z_plus)?], allowance).check()
}

/// Everything derived from one set of branch choices at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub params: ComplexParams,
    pub quad: QuadCoeffs,
    pub z_pair: ZPair,
    pub v: Complex,
    /// `U` at `z-`, `z+`.
    pub u: [Complex; 2],
    /// `z ∂U/∂z` at `z-`, `z+`.
    pub zdudz: [Complex; 2],
    /// `a_k ∂U/∂a_k` at `z-`, `z+` for each slot `k`.
    pub slot_sums: [[Complex; 6]; 2],
    /// Whether any term left its principal branch.
    pub continued: bool,
}

impl Evaluation {
    pub fn residues(&self) -> Residues {
        let allowance = self
            .z_pair
            .roots()
            .iter()
            .map(|&z| log_rounding_bound(&self.params, z))
            .fold(0.0, f64::max);
        Residues::from_values(self.zdudz, allowance)
    }

    /// `∂V/∂a_k · a_k`.
    pub fn dv_dlog_a(&self, slot: usize) -> Complex {
        0.25 * I * (self.slot_sums[0][slot] - self.slot_sums[1][slot])
    }

    /// `∂V_l/∂l_i` for length parameters (the real part of the slot
    /// derivative; the imaginary part of `V_l` is constant).
    pub fn length_partials(&self) -> [f64; 6] {
        std::array::from_fn(|i| self.dv_dlog_a(LENGTH_SLOT[i]).re)
    }

    /// Largest quadratic residual of the two roots.
    pub fn quadratic_residual(&self) -> f64 {
        self.quad
            .relative_residual(self.z_pair.z_minus)
            .max(self.quad.relative_residual(self.z_pair.z_plus))
    }
}

/// Native coordinates of a parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Native {
    Angles([f64; 6]),
    Lengths([f64; 6]),
}

impl Native {
    fn of(p: &ComplexParams) -> Result<Self, VolumeError> {
        match p.origin {
            Origin::Angles(a) => Ok(Native::Angles(a.values())),
            Origin::Lengths(l) => Ok(Native::Lengths(l.values())),
            Origin::Formal => Err(VolumeError::OriginMismatch),
        }
    }

    fn values(&self) -> [f64; 6] {
        match self {
            Native::Angles(v) | Native::Lengths(v) => *v,
        }
    }

    fn with_values(&self, v: [f64; 6]) -> Self {
        match self {
            Native::Angles(_) => Native::Angles(v),
            Native::Lengths(_) => Native::Lengths(v),
        }
    }

    fn lerp(&self, to: &Native, t: f64) -> Result<Self, VolumeError> {
        match (self, to) {
            (Native::Angles(_), Native::Angles(_)) | (Native::Lengths(_), Native::Lengths(_)) => {
                let (x, y) = (self.values(), to.values());
                Ok(self.with_values(std::array::from_fn(|k| x[k] + t * (y[k] - x[k]))))
            }
            _ => Err(VolumeError::OriginMismatch),
        }
    }

    fn nudged(&self) -> Self {
        let v = self.values();
        self.with_values(std::array::from_fn(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            v[k] * (1.0 + sign * PATH_NUDGE)
        }))
    }

    fn params(&self) -> Result<ComplexParams, VolumeError> {
        Ok(match self {
            Native::Angles(v) => params_from_angles(&Angles6::new(*v)?),
            Native::Lengths(v) => params_from_lengths(&Lengths6::new(*v)?),
        })
    }

    fn shape(&self) -> Result<Shape, VolumeError> {
        Ok(match self {
            Native::Angles(v) => classify(&Angles6::new(*v)?),
            Native::Lengths(v) => match check_lengths(&Lengths6::new(*v)?) {
                Ok(_) => Shape::Hyperbolic,
                Err(_) => Shape::NotRealizable,
            },
        })
    }
}

/// Analytic continuation of all terms of `V` along paths in the native
/// coordinates.
#[derive(Debug, Clone)]
pub struct Tracker {
    native: Option<Native>,
    params: ComplexParams,
    roots: [Complex; 2],
    li2: [[Li2Continuation; 8]; 2],
    log_z: [LogContinuation; 2],
}

/// Initial and largest path increments, and the smallest before giving up.
const PATH_DT_START: f64 = 1.0 / 64.0;
const PATH_DT_MAX: f64 = 1.0 / 16.0;
const PATH_DT_MIN: f64 = 1e-12;

/// A root may move at most this fraction of the root separation per step.
const ROOT_STEP_FRACTION: f64 = 0.25;

impl Tracker {
    /// Starts on the principal branches at `p`.
    pub fn start(p: &ComplexParams) -> Result<Self, VolumeError> {
        let quad = quad_coeffs(p);
        let zp = z_roots(&quad, p)?;
        let roots = zp.roots();
        let terms = p.terms();
        let mut li2 = [[Li2Continuation::principal(Complex::new(0.0, 0.0))?; 8]; 2];
        for (r, &z) in roots.iter().enumerate() {
            for (j, &(_, c)) in terms.iter().enumerate() {
                li2[r][j] = Li2Continuation::principal(c * z)?;
            }
        }
        Ok(Self {
            native: Native::of(p).ok(),
            params: *p,
            roots,
            li2,
            log_z: [
                LogContinuation::new(roots[0])?,
                LogContinuation::new(roots[1])?,
            ],
        })
    }

    pub fn params(&self) -> &ComplexParams {
        &self.params
    }

    /// Moves the state to `node` in one step, or reports why it cannot.
    fn try_step(&self, node: &Native) -> Result<Self, VolumeError> {
        let p = node.params()?;
        let (cm, cp) = closed_form_roots(&p).ok_or(VolumeError::OriginMismatch)?;
        let [pm, pp] = self.roots;
        let keep = (cm - pm).norm() + (cp - pp).norm();
        let flip = (cp - pm).norm() + (cm - pp).norm();
        let roots = if keep <= flip { [cm, cp] } else { [cp, cm] };
        let separation = (pm - pp).norm();
        let moved = (roots[0] - pm).norm().max((roots[1] - pp).norm());
        if !(moved <= ROOT_STEP_FRACTION * separation) {
            return Err(VolumeError::PathStall);
        }
        let mut next = self.clone();
        let terms = p.terms();
        for (r, &z) in roots.iter().enumerate() {
            for (j, &(_, c)) in terms.iter().enumerate() {
                next.li2[r][j].step(c * z)?;
            }
            next.log_z[r].step(z)?;
        }
        next.native = Some(*node);
        next.params = p;
        next.roots = roots;
        Ok(next)
    }

    /// Continues along the straight native-coordinate path to `target`. Steps
    /// are halved until each one is certified; interior nodes that land on a
    /// branch point are nudged.
    pub fn advance_to(&mut self, target: &ComplexParams) -> Result<(), VolumeError> {
        let from = self.native.ok_or(VolumeError::OriginMismatch)?;
        let to = Native::of(target)?;
        if from.lerp(&to, 1.0)? == from {
            return Ok(());
        }
        let region = to.shape()?;
        let mut t = 0.0;
        let mut dt = PATH_DT_START;
        while t < 1.0 {
            let t_next = (t + dt).min(1.0);
            let mut node = from.lerp(&to, t_next)?;
            if t_next == 1.0 {
                node = to;
            }
            if node.shape()? != region {
                return Err(VolumeError::PathLeavesRegion(region));
            }
            let attempt = match self.try_step(&node) {
                Err(VolumeError::Dilog(DilogError::BranchPoint(_))) if t_next < 1.0 => {
                    self.try_step(&node.nudged())
                }
                other => other,
            };
            match attempt {
                Ok(next) => {
                    *self = next;
                    t = t_next;
                    dt = (2.0 * dt).min(PATH_DT_MAX);
                }
                Err(VolumeError::PathStall)
                | Err(VolumeError::Dilog(DilogError::StepTooLong { .. })) => {
                    dt *= 0.5;
                    if dt < PATH_DT_MIN {
                        return Err(VolumeError::PathStall);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    pub fn evaluation(&self) -> Result<Evaluation, VolumeError> {
        let quad = quad_coeffs(&self.params);
        let mut z_pair = z_roots(&quad, &self.params)?;
        z_pair.z_minus = self.roots[0];
        z_pair.z_plus = self.roots[1];
        let mut u = [Complex::new(0.0, 0.0); 2];
        let mut du = [Complex::new(0.0, 0.0); 2];
        let mut slot_sums = [[Complex::new(0.0, 0.0); 6]; 2];
        let mut f = [Complex::new(0.0, 0.0); 2];
        let mut continued = false;
        for r in 0..2 {
            for (j, &(s, mask)) in TERMS.iter().enumerate() {
                let cont = &self.li2[r][j];
                continued |= cont.sheet() != 0;
                u[r] += s * cont.value();
                let d = -s * cont.log_one_minus();
                du[r] += d;
                for &k in mask {
                    slot_sums[r][k] += d;
                }
            }
            continued |= self.log_z[r].winding() != 0;
            f[r] = u[r] - du[r] * self.log_z[r].value();
        }
        Ok(Evaluation {
            params: self.params,
            quad,
            z_pair,
            v: 0.25 * I * (f[0] - f[1]),
            u,
            zdudz: du,
            slot_sums,
            continued,
        })
    }
}

/// Principal-branch evaluation at `p`.
pub fn evaluate(p: &ComplexParams) -> Result<Evaluation, VolumeError> {
    Tracker::start(p)?.evaluation()
}

/// `V` on principal branches.
pub fn v_eval(p: &ComplexParams) -> Result<Complex, VolumeError> {
    Ok(evaluate(p)?.v)
}

/// Continued evaluation at `p`, reached from the principal branches at
/// `reference` along the straight path in native coordinates.
pub fn evaluate_tracked(
    p: &ComplexParams,
    reference: &ComplexParams,
) -> Result<Evaluation, VolumeError> {
    let mut tracker = Tracker::start(reference)?;
    tracker.advance_to(p)?;
    tracker.evaluation()
}

/// `V` continued from `reference` to `p`.
pub fn v_eval_tracked(
    p: &ComplexParams,
    reference: &ComplexParams,
) -> Result<Complex, VolumeError> {
    Ok(evaluate_tracked(p, reference)?.v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Angles,
    AnglesTracked,
    Lengths,
    LengthsTracked,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Angles => "angles",
            Method::AnglesTracked => "angles-tracked",
            Method::Lengths => "lengths",
            Method::LengthsTracked => "lengths-tracked",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeResult {
    pub volume: f64,
    pub shape: Shape,
    pub z_pair: ZPair,
    pub residues: (i64, i64),
    pub partials: Option<[f64; 6]>,
    pub method: Method,
    pub diagnostics: BTreeMap<String, f64>,
}

fn common_diagnostics(e: &Evaluation) -> BTreeMap<String, f64> {
    let res = e.residues();
    let mut d = BTreeMap::new();
    d.insert("quadratic_residual".into(), e.quadratic_residual());
    d.insert("quadratic_gap".into(), e.z_pair.quadratic_gap());
    d.insert("residue_snap".into(), res.snap);
    d.insert("residue_real".into(), res.real);
    d.insert("residue_allowance".into(), res.allowance);
    d.insert("continued".into(), if e.continued { 1.0 } else { 0.0 });
    d
}

fn limit_check(check: &'static str, value: f64, limit: f64) -> Result<(), VolumeError> {
    if value < limit {
        Ok(())
    } else {
        Err(VolumeError::BranchIntegrity {
            check,
            value,
            limit,
        })
    }
}

/// Reference point for continuations into the spherical region: the regular
/// tetrahedron just past the Euclidean one.
pub fn spherical_reference() -> Angles6 {
    Angles6::regular((1.0f64 / 3.0).acos() + SPHERICAL_REFERENCE_OFFSET).expect("valid angle")
}

/// Volume from dihedral angles: `-Re V` for hyperbolic input, `Re(-i V)` for
/// spherical input (continued from [`spherical_reference`]), and `-Re V`
/// (which vanishes) for Euclidean input.
pub fn volume_from_angles(a: &Angles6) -> Result<VolumeResult, VolumeError> {
    let shape = classify(a);
    let p = params_from_angles(a);
    let (e, method) = match shape {
        Shape::NotRealizable => return Err(GramError::NotRealizable.into()),
        Shape::Spherical => (
            evaluate_tracked(&p, &params_from_angles(&spherical_reference()))?,
            Method::AnglesTracked,
        ),
        Shape::Hyperbolic | Shape::Euclidean => (evaluate(&p)?, Method::Angles),
    };
    let (volume, discarded) = match shape {
        Shape::Spherical => (e.v.im, e.v.re.abs()),
        _ => (-e.v.re, e.v.im.abs()),
    };
    let mut diagnostics = common_diagnostics(&e);
    diagnostics.insert("discarded_imag".into(), discarded);
    let residues = e.residues().check()?;
    limit_check("discarded_imag", discarded, ANGLE_IMAG)?;
    Ok(VolumeResult {
        volume,
        shape,
        z_pair: e.z_pair,
        residues,
        partials: None,
        method,
        diagnostics,
    })
}

/// Lengths with edge `i` shifted by `delta`.
fn shifted(l: &[f64; 6], i: usize, delta: f64) -> Result<Lengths6, VolumeError> {
    let mut v = *l;
    v[i] += delta;
    Ok(Lengths6::new(v)?)
}

/// Reconciles the analytic partials of an evaluation with central
/// differences of `re_v` (Richardson-extrapolated from steps `h`, `h/2`):
/// each analytic value is shifted by the multiple of π/2 that matches, and
/// the shifted values must then agree closely. One retry with `h/10`.
fn reconcile_partials<F>(
    l: &Lengths6,
    analytic: [f64; 6],
    mut re_v: F,
) -> Result<([f64; 6], f64), VolumeError>
where
    F: FnMut(&Lengths6) -> Result<f64, VolumeError>,
{
    let base = l.values();
    let mut out = [0.0; 6];
    let mut worst = 0.0f64;
    for i in 0..6 {
        let mut h = FD_STEP.min(0.25 * base[i]);
        let mut last_err = None;
        let mut done = false;
        for _ in 0..2 {
            let mut quotient = |step: f64| -> Result<f64, VolumeError> {
                let up = re_v(&shifted(&base, i, step)?)?;
                let down = re_v(&shifted(&base, i, -step)?)?;
                Ok((up - down) / (2.0 * step))
            };
            let fd = match (quotient(h), quotient(0.5 * h)) {
                (Ok(d1), Ok(d2)) => (4.0 * d2 - d1) / 3.0,
                (Err(e), _) | (_, Err(e)) => {
                    last_err = Some(e);
                    h *= 0.1;
                    continue;
                }
            };
            let m = ((fd - analytic[i]) / FRAC_PI_2).round();
            let shifted_value = analytic[i] + m * FRAC_PI_2;
            let coset = (fd - shifted_value).abs();
            if !(coset < PARTIAL_COSET) {
                last_err = Some(VolumeError::BranchIntegrity {
                    check: "partial_coset",
                    value: coset,
                    limit: PARTIAL_COSET,
                });
                h *= 0.1;
                continue;
            }
            if !(coset < PARTIAL_AGREEMENT) {
                last_err = Some(VolumeError::BranchIntegrity {
                    check: "partial_agreement",
                    value: coset,
                    limit: PARTIAL_AGREEMENT,
                });
                h *= 0.1;
                continue;
            }
            worst = worst.max(coset);
            out[i] = shifted_value;
            done = true;
            break;
        }
        if !done {
            return Err(last_err.expect("a failed attempt records its error"));
        }
    }
    Ok((out, worst))
}

/// `∂V_l/∂l_i` on principal branches, reconciled against finite differences.
pub fn partials_vl(l: &Lengths6) -> Result<[f64; 6], VolumeError> {
    check_lengths(l)?;
    let e = evaluate(&params_from_lengths(l))?;
    let (partials, _) = reconcile_partials(l, e.length_partials(), |x| {
        Ok(v_eval(&params_from_lengths(x))?.re)
    })?;
    Ok(partials)
}

/// Largest distance of `2 ∂V_l/∂l_i - A_i` from a multiple of π.
pub fn congruence_defect(partials: &[f64; 6], angles: &Angles6) -> f64 {
    partials
        .iter()
        .zip(angles.values())
        .map(|(&d, a)| {
            let x = (2.0 * d - a) / PI;
            (x - x.round()).abs() * PI
        })
        .fold(0.0, f64::max)
}

/// Volume, partials and diagnostics of one length-formula attempt.
type Attempt = (f64, [f64; 6], BTreeMap<String, f64>);

/// One length-formula attempt with the given evaluator.
fn lengths_attempt<F>(l: &Lengths6, e: &Evaluation, re_v: F) -> Result<Attempt, VolumeError>
where
    F: FnMut(&Lengths6) -> Result<f64, VolumeError>,
{
    let mut d = common_diagnostics(e);
    let imag = e.v.im.abs() / e.v.norm().max(1.0);
    d.insert("v_imag".into(), imag);
    e.residues().check()?;
    limit_check("v_imag", imag, V_REAL_REL)?;
    let (partials, agreement) = reconcile_partials(l, e.length_partials(), re_v)?;
    d.insert("partial_agreement".into(), agreement);
    let angles = lengths_to_angles(l)?;
    let congruence = congruence_defect(&partials, &angles);
    d.insert("congruence".into(), congruence);
    limit_check("congruence", congruence, CONGRUENCE)?;
    let lv = l.values();
    let volume = e.v.re - (0..6).map(|i| lv[i] * partials[i]).sum::<f64>();
    if !(volume > 0.0) {
        return Err(VolumeError::BranchIntegrity {
            check: "positivity",
            value: -volume,
            limit: 0.0,
        });
    }
    Ok((volume, partials, d))
}

/// Volume from edge lengths, `Re V_l - Σ l_i ∂V_l/∂l_i`.
///
/// Evaluated on principal branches first; if any branch diagnostic fails, the
/// evaluation is continued from the regular tetrahedron with the mean edge
/// length instead.
pub fn volume_from_lengths(l: &Lengths6) -> Result<VolumeResult, VolumeError> {
    check_lengths(l)?;
    let p = params_from_lengths(l);
    let e = evaluate(&p)?;
    let principal = lengths_attempt(l, &e, |x| Ok(v_eval(&params_from_lengths(x))?.re));
    let (e, method, (volume, partials, diagnostics)) = match principal {
        Ok(out) => (e, Method::Lengths, out),
        Err(first) => {
            let mean = l.values().iter().sum::<f64>() / 6.0;
            let mut tracker = Tracker::start(&params_from_lengths(&Lengths6::regular(mean)?))?;
            tracker.advance_to(&p)?;
            let e = tracker.evaluation()?;
            let out = lengths_attempt(l, &e, |x| {
                let mut t = tracker.clone();
                t.advance_to(&params_from_lengths(x))?;
                Ok(t.evaluation()?.v.re)
            })
            .map_err(|_| first)?;
            (e, Method::LengthsTracked, out)
        }
    };
    Ok(VolumeResult {
        volume,
        shape: Shape::Hyperbolic,
        z_pair: e.z_pair,
        residues: e.residues().k,
        partials: Some(partials),
        method,
        diagnostics,
    })
}

/// Largest violation of `∂Vol/∂A_i = -l_i / 2`, with the derivative taken by
/// central differences of step `h`.
pub fn schlafli_defect(a: &Angles6, h: f64) -> Result<f64, VolumeError> {
    let lengths = crate::gram::angles_to_lengths(a)?.values();
    let base = a.values();
    let mut worst = 0.0f64;
    for i in 0..6 {
        let vol = |delta: f64| -> Result<f64, VolumeError> {
            let mut v = base;
            v[i] += delta;
            let shifted = Angles6::new(v)?;
            let shape = classify(&shifted);
            if shape != Shape::Hyperbolic {
                return Err(GramError::NotHyperbolic(shape).into());
            }
            Ok(volume_from_angles(&shifted)?.volume)
        };
        let d = (vol(h)? - vol(-h)?) / (2.0 * h);
        worst = worst.max((d + 0.5 * lengths[i]).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilog::lobachevsky;
    use crate::tolerance::QUADRATIC_RESIDUAL;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn regular_angle(rho: f64) -> f64 {
        (rho.cosh() / (2.0 * rho.cosh() + 1.0)).acos()
    }

    #[test]
    fn parameter_maps() {
        let p = params_from_angles(&Angles6::regular(FRAC_PI_2).unwrap());
        for a in p.a {
            assert_relative_eq!((a - I).norm(), 0.0, epsilon = 1e-15);
        }
        let p = params_from_angles(&Angles6::new([PI / 3.0, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap());
        assert_relative_eq!(
            (p.a[0] - c(0.5, 3f64.sqrt() / 2.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        let p = params_from_lengths(&Lengths6::new([1.0, 0.5, 0.5, 0.5, 0.5, 0.5]).unwrap());
        assert_eq!(p.a[3], c(-1f64.exp(), 0.0));
        for k in [0, 1, 2, 4, 5] {
            assert_eq!(p.a[k], c(-0.5f64.exp(), 0.0));
        }
    }

    #[test]
    fn quadratic_coefficients() {
        let q = quad_coeffs(&ComplexParams::formal([c(1.0, 0.0); 6]));
        assert_eq!((q.q0, q.q1, q.q2), (c(8.0, 0.0), c(0.0, 0.0), c(8.0, 0.0)));

        let rho: f64 = 0.7;
        let q = quad_coeffs(&params_from_lengths(&Lengths6::regular(rho).unwrap()));
        let expected = -(6.0 * rho).exp() * 3.0 * (rho.exp() - (-rho).exp()).powi(2);
        assert_relative_eq!(q.q1.re, expected, max_relative = 1e-13);
        assert_eq!(q.q1.im, 0.0);

        let a = Angles6::new([1.1, 1.3, 0.9, 1.2, 1.0, 1.4]).unwrap();
        let p = params_from_angles(&a);
        let prod = p.a.iter().product::<Complex>();
        assert_relative_eq!(
            (quad_coeffs(&p).q2 - prod * angle_normalizer(&a)).norm(),
            0.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn regular_roots_match_closed_form() {
        let rho: f64 = 1.0;
        let (ch, sh) = (rho.cosh(), rho.sinh());
        let den = 2.0 * (4.0 * rho).exp() * (2.0 * ch - sh + 1.0);
        let expected = c(3.0 * (ch + 1.0), -((ch - 1.0) * (3.0 * ch + 1.0)).sqrt()) / den;
        let p = params_from_lengths(&Lengths6::regular(rho).unwrap());
        let q = quad_coeffs(&p);
        let zp = z_roots(&q, &p).unwrap();
        assert_relative_eq!((zp.z_minus - expected).norm(), 0.0, epsilon = 1e-14);
        assert_relative_eq!((zp.quadratic_minus - expected).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((zp.z_plus - expected.conj()).norm(), 0.0, epsilon = 1e-14);
        assert!(q.relative_residual(zp.z_minus) < QUADRATIC_RESIDUAL);
        assert!(q.relative_residual(zp.z_plus) < QUADRATIC_RESIDUAL);
    }

    #[test]
    fn length_normalizer_matches_direct_sum() {
        let l = [0.4, 1.3, 0.8, 1.1, 0.6, 2.0];
        let e = |idx: &[usize]| idx.iter().map(|&k| l[k]).sum::<f64>().exp();
        let direct = e(&[0, 3]) + e(&[1, 4]) + e(&[2, 5])
            - e(&[0, 1, 2])
            - e(&[0, 4, 5])
            - e(&[1, 3, 5])
            - e(&[2, 3, 4])
            + e(&[0, 1, 2, 3, 4, 5]);
        assert_relative_eq!(
            length_normalizer(&Lengths6::new(l).unwrap()),
            direct,
            max_relative = 1e-13
        );
    }

    #[test]
    fn degenerate_quadratic() {
        let q = QuadCoeffs {
            q0: c(1.0, 0.0),
            q1: c(1.0, 0.0),
            q2: c(0.0, 0.0),
        };
        assert!(matches!(
            quadratic_roots(&q),
            Err(VolumeError::DegenerateQuadratic(_))
        ));
    }

    #[test]
    fn u_and_its_derivative() {
        let p = params_from_lengths(&Lengths6::new([0.9, 1.2, 1.0, 1.1, 0.8, 1.3]).unwrap());
        assert_eq!(u_eval(&p, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(zdudz(&p, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let z = c(0.01, 0.02);
        assert_relative_eq!(
            (u_eval(&p, z.conj()).unwrap() - u_eval(&p, z).unwrap().conj()).norm(),
            0.0,
            epsilon = 1e-14
        );
        let h = 1e-6;
        let fd = z * (u_eval(&p, z + h).unwrap() - u_eval(&p, z - h).unwrap()) / (2.0 * h);
        assert_relative_eq!((fd - zdudz(&p, z).unwrap()).norm(), 0.0, epsilon = 1e-6);

        let ones = ComplexParams::formal([c(1.0, 0.0); 6]);
        let t = c(0.3, 0.0);
        let collapsed = 4.0 * li2(t) - 4.0 * li2(-t);
        assert_relative_eq!(
            (u_eval(&ones, t).unwrap() - collapsed).norm(),
            0.0,
            epsilon = 1e-14
        );
        assert!(u_eval(&ones, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn residues_of_regular_input() {
        let p = params_from_lengths(&Lengths6::regular(1.0).unwrap());
        let zp = z_roots(&quad_coeffs(&p), &p).unwrap();
        let (km, kp) = branch_residues(&p, &zp).unwrap();
        assert_eq!(km, -kp);
        assert_eq!((km, kp), (-1, 1));
    }

    #[test]
    fn v_of_lengths_is_real() {
        let v = v_eval(&params_from_lengths(
            &Lengths6::new([0.9, 1.2, 1.0, 1.1, 0.8, 1.3]).unwrap(),
        ))
        .unwrap();
        assert!(v.im.abs() < V_REAL_REL * v.norm().max(1.0));
        let v = v_eval(&params_from_lengths(&Lengths6::regular(1.0).unwrap())).unwrap();
        assert_relative_eq!(v.re, 13.066_039_866_801_27, max_relative = 1e-12);
    }

    #[test]
    fn euclidean_regular_v_vanishes() {
        let r = volume_from_angles(&Angles6::regular((1.0f64 / 3.0).acos()).unwrap()).unwrap();
        assert_eq!(r.shape, Shape::Euclidean);
        assert!(r.volume.abs() < 1e-8);
    }

    #[test]
    fn spherical_orthoscheme_value() {
        let r = volume_from_angles(&Angles6::regular(FRAC_PI_2).unwrap()).unwrap();
        assert_eq!(r.shape, Shape::Spherical);
        assert_eq!(r.method, Method::AnglesTracked);
        assert_relative_eq!(r.volume, PI * PI / 8.0, epsilon = 1e-8);
    }

    #[test]
    fn hyperbolic_regular_volume() {
        let angles = Angles6::regular(regular_angle(1.0)).unwrap();
        let from_angles = volume_from_angles(&angles).unwrap();
        assert_relative_eq!(from_angles.volume, 0.090_597_925_377_724_2, epsilon = 1e-12);
        let from_lengths = volume_from_lengths(&Lengths6::regular(1.0).unwrap()).unwrap();
        assert_eq!(from_lengths.method, Method::Lengths);
        assert_relative_eq!(from_lengths.volume, from_angles.volume, epsilon = 1e-8);
    }

    #[test]
    fn regular_partials() {
        for rho in [0.25f64, 1.0, 2.0] {
            let partials = partials_vl(&Lengths6::regular(rho).unwrap()).unwrap();
            let ch = rho.cosh();
            let base = (((ch + 1.0) * (3.0 * ch + 1.0)).sqrt() / ch).atan();
            for d in partials {
                assert_relative_eq!(d, 0.5 * (base + PI), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn congruence_on_irregular_input() {
        let l = Lengths6::new([0.9, 1.2, 1.0, 1.1, 0.8, 1.3]).unwrap();
        let partials = partials_vl(&l).unwrap();
        assert!(congruence_defect(&partials, &lengths_to_angles(&l).unwrap()) < CONGRUENCE);
    }

    #[test]
    fn shrinking_regular_volume() {
        let v: Vec<f64> = [0.1, 0.01, 0.001]
            .iter()
            .map(|&r| {
                volume_from_lengths(&Lengths6::regular(r).unwrap())
                    .unwrap()
                    .volume
            })
            .collect();
        assert_relative_eq!(v[0], 1.175_131_2e-4, max_relative = 1e-6);
        assert_relative_eq!(v[1], 1.178_477_4e-7, max_relative = 1e-5);
        assert!(v[2] < 1e-6 && v[2] > 0.0);
    }

    #[test]
    fn tracked_matches_principal_nearby() {
        let reference = params_from_lengths(&Lengths6::regular(1.0).unwrap());
        assert_eq!(
            v_eval_tracked(&reference, &reference).unwrap(),
            v_eval(&reference).unwrap()
        );
        let p = params_from_lengths(&Lengths6::new([1.05, 0.97, 1.02, 0.93, 1.08, 1.0]).unwrap());
        let tracked = evaluate_tracked(&p, &reference).unwrap();
        assert!(!tracked.continued);
        assert_relative_eq!(
            (tracked.v - v_eval(&p).unwrap()).norm(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn tracked_spherical_continuation_is_refinement_stable() {
        let reference = params_from_angles(&spherical_reference());
        let target = params_from_angles(&Angles6::new([1.5, 1.6, 1.45, 1.55, 1.5, 1.62]).unwrap());
        let direct = v_eval_tracked(&target, &reference).unwrap();
        let mut tracker = Tracker::start(&reference).unwrap();
        let mid = params_from_angles(&Angles6::new([1.4, 1.5, 1.35, 1.45, 1.4, 1.5]).unwrap());
        tracker.advance_to(&mid).unwrap();
        tracker.advance_to(&target).unwrap();
        let via = tracker.evaluation().unwrap().v;
        assert_relative_eq!((direct - via).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn near_ideal_regular_volume() {
        let r = volume_from_angles(&Angles6::regular(PI / 3.0 + 1e-4).unwrap()).unwrap();
        assert_eq!(r.shape, Shape::Hyperbolic);
        assert!(r.volume < 3.0 * lobachevsky(PI / 3.0));
        assert_relative_eq!(r.volume, 1.012_043, epsilon = 1e-5);
    }

    #[test]
    fn schlafli_on_regular_and_irregular_input() {
        let l = Lengths6::new([0.9, 1.2, 1.0, 1.1, 0.8, 1.3]).unwrap();
        let a = lengths_to_angles(&l).unwrap();
        assert!(schlafli_defect(&a, 1e-5).unwrap() < 1e-6);
        assert!(schlafli_defect(&Angles6::regular(1.1).unwrap(), 1e-5).unwrap() < 1e-6);
    }

    #[test]
    fn spherical_volumes_satisfy_schlafli() {
        // On the sphere dVol = +1/2 Σ l_i dA_i, with cos l = c_ij / sqrt(c_ii c_jj).
        let a = [2.1, 1.6, 1.9, 1.7, 2.2, 1.5];
        let angles = Angles6::new(a).unwrap();
        assert_eq!(classify(&angles), Shape::Spherical);
        let cof = gram_from_angles(&angles).cofactors();
        let h = 1e-5;
        for (k, &(i, j)) in crate::gram::LENGTH_VERTICES.iter().enumerate() {
            let l = (cof.get(i, j) / (cof.get(i, i) * cof.get(j, j)).sqrt()).acos();
            let vol = |d: f64| {
                let mut v = a;
                v[k] += d;
                volume_from_angles(&Angles6::new(v).unwrap())
                    .unwrap()
                    .volume
            };
            assert_relative_eq!((vol(h) - vol(-h)) / (2.0 * h), 0.5 * l, epsilon = 1e-8);
        }
    }

    #[test]
    fn not_realizable_angles_are_rejected() {
        let a = Angles6::regular(0.3).unwrap();
        assert!(matches!(
            volume_from_angles(&a),
            Err(VolumeError::Gram(GramError::NotRealizable))
        ));
    }
}
