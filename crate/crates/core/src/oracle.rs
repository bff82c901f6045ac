//! Formula-free hyperbolic volumes by numerical integration, and closed-form
//! fixtures for the regular tetrahedron.
//!
//! A tetrahedron given by its edge lengths is realized on the hyperboloid,
//! moved so that its vertex barycenter sits over the origin, and projected to
//! the Klein model, where it is a Euclidean tetrahedron and the hyperbolic
//! volume element is `(1 - |x|²)^{-2} dx dy dz`. That density is integrated
//! by global adaptive longest-edge bisection.
//!
//! # Golden files
//!
//! Golden values are plain text, one record per line with four
//! whitespace-separated fields:
//!
//! ```text
//! rho_or_lengths  volume  rel_tol  cells
//! ```
//!
//! `rho_or_lengths` is either one number (the edge length of a regular
//! tetrahedron) or six comma-separated edge lengths `l1,...,l6`. `volume` is
//! the oracle value, `rel_tol` the quadrature tolerance that produced it and
//! `cells` the number of leaf cells at termination. Blank lines and lines
//! starting with `#` are ignored; `#` lines carry generation metadata.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dilog::{li2, Complex};
use crate::gram::{
    embed_vertices, to_klein, GramError, KleinTetrahedron, Lengths6, MinkowskiVertices,
};

/// Vertices closer than this to the unit sphere are refused.
pub const BOUNDARY_MARGIN: f64 = 1e-8;

/// Smallest accepted relative tolerance.
pub const MIN_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Gram(#[from] GramError),
    #[error("vertex {vertex} lies {distance:e} from the ideal boundary")]
    NearBoundary { vertex: usize, distance: f64 },
    #[error("the four vertices are affinely dependent")]
    Degenerate,
    #[error("no convergence within {cells} cells (error estimate {estimate:e})")]
    NotConverged { cells: usize, estimate: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Centroid rule; the error estimate compares it with its two halves.
    Midpoint,
    /// 15-point Grundmann–Möller rule, exact for polynomials of degree 5.
    Degree5,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Largest number of leaf cells before giving up.
    pub max_subdivisions: usize,
    pub rule: Rule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_subdivisions: 1_000_000,
            rule: Rule::Degree5,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.rel_tol >= MIN_REL_TOL) {
            return Err(OracleError::InvalidSpec("rel_tol must be at least 1e-12"));
        }
        if self.max_subdivisions == 0 {
            return Err(OracleError::InvalidSpec(
                "max_subdivisions must be positive",
            ));
        }
        Ok(())
    }
}

type Point = [f64; 3];
type Simplex = [Point; 4];

fn density(p: &Point) -> f64 {
    let s = 1.0 - (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    1.0 / (s * s)
}

fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn euclidean_volume(t: &KleinTetrahedron) -> f64 {
    let [p0, p1, p2, p3] = &t.0;
    let (a, b, c) = (sub(p1, p0), sub(p2, p0), sub(p3, p0));
    let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0]);
    det.abs() / 6.0
}

/// Barycentric nodes and weights (summing to one) of the degree-5
/// Grundmann–Möller rule on a tetrahedron.
fn degree5_rule() -> Vec<([f64; 4], f64)> {
    const S: usize = 2;
    const N: usize = 3;
    const D: i32 = 2 * S as i32 + 1;
    let factorial = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    let mut nodes = Vec::new();
    for i in 0..=S {
        let denom = (D as usize + N - 2 * i) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let weight = sign * denom.powi(D) / (factorial(i) * factorial(D as usize + N - i));
        let total = S - i;
        for b0 in 0..=total {
            for b1 in 0..=total - b0 {
                for b2 in 0..=total - b0 - b1 {
                    let b3 = total - b0 - b1 - b2;
                    let bary = [b0, b1, b2, b3].map(|b| (2 * b + 1) as f64 / denom);
                    nodes.push((bary, weight));
                }
            }
        }
    }
    let sum: f64 = nodes.iter().map(|(_, w)| w).sum();
    for node in nodes.iter_mut() {
        node.1 /= sum;
    }
    nodes
}

struct Integrator {
    nodes: Vec<([f64; 4], f64)>,
}

impl Integrator {
    fn new(rule: Rule) -> Self {
        let nodes = match rule {
            Rule::Midpoint => vec![([0.25; 4], 1.0)],
            Rule::Degree5 => degree5_rule(),
        };
        Self { nodes }
    }

    fn apply(&self, s: &Simplex) -> f64 {
        let vol = euclidean_volume(&KleinTetrahedron(*s));
        let mut sum = 0.0;
        for (bary, w) in &self.nodes {
            let mut p = [0.0; 3];
            for (k, v) in s.iter().enumerate() {
                for c in 0..3 {
                    p[c] += bary[k] * v[c];
                }
            }
            sum += w * density(&p);
        }
        vol * sum
    }
}

/// Splits a simplex at the midpoint of its longest edge (lowest index pair
/// on ties).
fn bisect(s: &Simplex) -> (Simplex, Simplex) {
    let mut best = (0, 1, -1.0);
    for i in 0..4 {
        for j in (i + 1)..4 {
            let d = sub(&s[i], &s[j]);
            let len = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            if len > best.2 {
                best = (i, j, len);
            }
        }
    }
    let (i, j, _) = best;
    let mid = [0, 1, 2].map(|c| 0.5 * (s[i][c] + s[j][c]));
    let mut a = *s;
    let mut b = *s;
    a[j] = mid;
    b[i] = mid;
    (a, b)
}

struct Cell {
    simplex: Simplex,
    /// Rule applied to the two halves.
    refined: f64,
    error: f64,
    seq: u64,
}

impl Cell {
    fn new(simplex: Simplex, coarse: f64, integrator: &Integrator, seq: u64) -> (Self, f64) {
        let (a, b) = bisect(&simplex);
        let (qa, qb) = (integrator.apply(&a), integrator.apply(&b));
        let refined = qa + qb;
        let cell = Self {
            simplex,
            refined,
            error: (refined - coarse).abs(),
            seq,
        };
        (cell, refined)
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Outcome of one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integration {
    pub value: f64,
    /// Sum of the local error estimates at termination.
    pub error_estimate: f64,
    /// Number of leaf cells at termination.
    pub cells: usize,
}

fn check_tetrahedron(t: &KleinTetrahedron) -> Result<(), OracleError> {
    for (vertex, p) in t.0.iter().enumerate() {
        let distance = 1.0 - (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if !(distance > BOUNDARY_MARGIN) {
            return Err(OracleError::NearBoundary { vertex, distance });
        }
    }
    if !(euclidean_volume(t) > 0.0) {
        return Err(OracleError::Degenerate);
    }
    Ok(())
}

/// Integrates `(1 - |x|²)^{-2}` over a Klein-model tetrahedron, reporting
/// the cell count and final error estimate.
pub fn integrate_klein_report(
    t: &KleinTetrahedron,
    spec: &QuadratureSpec,
) -> Result<Integration, OracleError> {
    spec.validate()?;
    check_tetrahedron(t)?;
    let integrator = Integrator::new(spec.rule);
    let mut seq = 0u64;
    let coarse = integrator.apply(&t.0);
    let (root, mut total) = Cell::new(t.0, coarse, &integrator, seq);
    let mut error = root.error;
    let mut heap = BinaryHeap::new();
    heap.push(root);
    while error > spec.rel_tol * total.abs() {
        if heap.len() >= spec.max_subdivisions {
            return Err(OracleError::NotConverged {
                cells: heap.len(),
                estimate: error,
            });
        }
        let cell = heap.pop().expect("heap is never empty");
        total -= cell.refined;
        error -= cell.error;
        let (a, b) = bisect(&cell.simplex);
        for half in [a, b] {
            seq += 1;
            let coarse = integrator.apply(&half);
            let (child, refined) = Cell::new(half, coarse, &integrator, seq);
            total += refined;
            error += child.error;
            heap.push(child);
        }
        // Running sums drift; refresh them from the leaves now and then.
        if seq.is_multiple_of(4096) {
            let (t, e) = leaf_sums(&heap);
            total = t;
            error = e;
        }
    }
    let (value, error_estimate) = leaf_sums(&heap);
    Ok(Integration {
        value,
        error_estimate,
        cells: heap.len(),
    })
}

/// Sums of refined values and errors over all leaves in creation order, so
/// the result does not depend on heap layout.
fn leaf_sums(heap: &BinaryHeap<Cell>) -> (f64, f64) {
    let mut leaves: Vec<&Cell> = heap.iter().collect();
    leaves.sort_by_key(|c| c.seq);
    leaves
        .iter()
        .fold((0.0, 0.0), |(v, e), c| (v + c.refined, e + c.error))
}

/// Hyperbolic volume of a Klein-model tetrahedron.
pub fn integrate_klein(t: &KleinTetrahedron, spec: &QuadratureSpec) -> Result<f64, OracleError> {
    Ok(integrate_klein_report(t, spec)?.value)
}

/// Volume of the tetrahedron spanned by hyperboloid points, projected as
/// given.
pub fn oracle_volume_of_vertices(
    v: &MinkowskiVertices,
    spec: &QuadratureSpec,
) -> Result<Integration, OracleError> {
    integrate_klein_report(&to_klein(v), spec)
}

/// Volume from edge lengths, without any closed formula.
pub fn oracle_volume_from_lengths(l: &Lengths6, spec: &QuadratureSpec) -> Result<f64, OracleError> {
    Ok(oracle_report_from_lengths(l, spec)?.value)
}

pub fn oracle_report_from_lengths(
    l: &Lengths6,
    spec: &QuadratureSpec,
) -> Result<Integration, OracleError> {
    let v = embed_vertices(l)?.centered();
    oracle_volume_of_vertices(&v, spec)
}

/// Lorentz boost of the given rapidity along spatial axis `axis` (0..3),
/// row-major, time last.
pub fn lorentz_boost(rapidity: f64, axis: usize) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = 1.0;
    }
    let (c, s) = (rapidity.cosh(), rapidity.sinh());
    m[axis][axis] = c;
    m[3][3] = c;
    m[axis][3] = s;
    m[3][axis] = s;
    m
}

/// `lim_{ρ→0} sqrt((cosh ρ + 1)(3 cosh ρ + 1)) / cosh ρ`.
pub const EUCLIDEAN_LIMIT_RATIO: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Specialized quantities for the regular tetrahedron with edge length `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularFixture {
    pub rho: f64,
    /// `[3(cosh ρ + 1) ∓ i sqrt((cosh ρ - 1)(3 cosh ρ + 1))] /
    /// [2 e^{4ρ} (2 cosh ρ - sinh ρ + 1)]`.
    pub z_minus: Complex,
    pub z_plus: Complex,
    /// Multipliers `m` of the three arguments `arg(1 - m z)` below.
    pub arg_multipliers: [f64; 3],
    /// The three arctangent expressions for `arg(1 - m z)`.
    pub arg_arctans: [f64; 3],
    /// `sqrt((cosh ρ + 1)(3 cosh ρ + 1)) / cosh ρ`.
    pub ratio: f64,
    /// `arctan(ratio)`: twice the per-edge `∂V_l/∂l_i` up to a multiple of π.
    pub partial_arctan: f64,
}

impl RegularFixture {
    /// `U` collapsed for the regular substitution,
    /// `Li2(z) + 3 Li2(e^{4ρ} z) - 4 Li2(e^{3ρ} z)`.
    pub fn collapsed_u(&self, z: Complex) -> Complex {
        let (m4, m3) = ((4.0 * self.rho).exp(), (3.0 * self.rho).exp());
        li2(z) + 3.0 * li2(m4 * z) - 4.0 * li2(m3 * z)
    }

    /// `arg(1 - z) + 3 arg(1 - e^{4ρ} z) - 4 arg(1 - e^{3ρ} z)`, principal
    /// arguments.
    pub fn arg_combination(&self, z: Complex) -> f64 {
        let [m1, m4, m3] = self.arg_multipliers;
        (1.0 - m1 * z).arg() + 3.0 * (1.0 - m4 * z).arg() - 4.0 * (1.0 - m3 * z).arg()
    }

    /// `V_l` from the collapsed form,
    /// `-1/2 [Im U(z-) + (arg combination at z-) log|z-|]`.
    pub fn specialized_v(&self) -> f64 {
        let z = self.z_minus;
        -0.5 * (self.collapsed_u(z).im + self.arg_combination(z) * z.norm().ln())
    }
}

pub fn regular_fixtures(rho: f64) -> RegularFixture {
    let (ch, sh, e) = (rho.cosh(), rho.sinh(), rho.exp());
    let den = 2.0 * (4.0 * rho).exp() * (2.0 * ch - sh + 1.0);
    let re = 3.0 * (ch + 1.0) / den;
    let im = ((ch - 1.0) * (3.0 * ch + 1.0)).sqrt() / den;
    let root = (3.0 * e * e + 2.0 * e + 3.0).sqrt();
    let e2 = e * e;
    let e3 = e2 * e;
    let e4 = e3 * e;
    let e5 = e4 * e;
    let ratio = ((ch + 1.0) * (3.0 * ch + 1.0)).sqrt() / ch;
    RegularFixture {
        rho,
        z_minus: Complex::new(re, -im),
        z_plus: Complex::new(re, im),
        arg_multipliers: [1.0, (4.0 * rho).exp(), (3.0 * rho).exp()],
        arg_arctans: [
            (-root / (2.0 * e5 + 6.0 * e4 + 12.0 * e3 + 12.0 * e2 + 9.0 * e + 3.0)).atan(),
            (root / (e + 3.0)).atan(),
            (-root / (2.0 * e2 + 3.0 * e + 3.0)).atan(),
        ],
        ratio,
        partial_arctan: ratio.atan(),
    }
}

/// Which tetrahedron a golden record describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GoldenShape {
    Regular(f64),
    Lengths([f64; 6]),
}

impl GoldenShape {
    pub fn lengths(&self) -> Result<Lengths6, GramError> {
        match self {
            GoldenShape::Regular(rho) => Lengths6::regular(*rho),
            GoldenShape::Lengths(l) => Lengths6::new(*l),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenRecord {
    pub shape: GoldenShape,
    pub volume: f64,
    pub rel_tol: f64,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("golden line {line}: {message}")]
pub struct GoldenParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for GoldenRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape {
            GoldenShape::Regular(rho) => write!(f, "{rho}")?,
            GoldenShape::Lengths(l) => {
                let parts: Vec<String> = l.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))?
            }
        }
        write!(
            f,
            "  {:.15e}  {:e}  {}",
            self.volume, self.rel_tol, self.cells
        )
    }
}

impl FromStr for GoldenRecord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = s.split_whitespace().collect();
        let [shape, volume, rel_tol, cells] = fields[..] else {
            return Err(format!("expected 4 fields, found {}", fields.len()));
        };
        let num = |x: &str| x.parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
        let parts = shape.split(',').map(num).collect::<Result<Vec<f64>, _>>()?;
        let shape = match parts[..] {
            [rho] => GoldenShape::Regular(rho),
            [a, b, c, d, e, g] => GoldenShape::Lengths([a, b, c, d, e, g]),
            _ => return Err(format!("expected 1 or 6 lengths, found {}", parts.len())),
        };
        Ok(Self {
            shape,
            volume: num(volume)?,
            rel_tol: num(rel_tol)?,
            cells: cells.parse().map_err(|e| format!("`{cells}`: {e}"))?,
        })
    }
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenRecord>, GoldenParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| {
            l.parse().map_err(|message| GoldenParseError {
                line: i + 1,
                message,
            })
        })
        .collect()
}

/// The committed golden values.
pub const GOLDEN: &str = include_str!("../golden/regular.txt");
