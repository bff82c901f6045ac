//! Gram matrices of a tetrahedron and the angle/length conversions built on
//! their cofactors.
//!
//! Two flavors exist. The angle flavor `G_A` holds `-cos` of the dihedral
//! angles between outward face normals (unit diagonal); the length flavor
//! `G_l` holds the Minkowski products `-cosh` of the edge lengths between
//! vertex vectors on the hyperboloid (diagonal `-1`). Both are indexed by
//! the tetrahedron labeling documented at the crate root.

use std::fmt;

use thiserror::Error;

use crate::tolerance::{COFACTOR_REL, SIGNATURE_REL};

pub type Mat4 = [[f64; 4]; 4];

/// Face pair `(i, j)` (0-based) of the dihedral angle at edge `k`.
pub const ANGLE_FACES: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3)];

/// Vertex pair `(i, j)` (0-based) of edge `k`, the complement of its face pair.
pub const LENGTH_VERTICES: [(usize, usize); 6] = [(2, 3), (1, 3), (0, 3), (0, 1), (0, 2), (1, 2)];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GramError {
    #[error("angle A{index} = {value} is outside (0, π)")]
    InvalidAngle { index: usize, value: f64 },
    #[error("length l{index} = {value} is not a positive finite number")]
    InvalidLength { index: usize, value: f64 },
    #[error("angles describe a {0} tetrahedron, not a hyperbolic one")]
    NotHyperbolic(Shape),
    #[error("angles do not bound any tetrahedron")]
    NotRealizable,
    #[error("length Gram matrix has signature ({positive},{negative}) with {degenerate} degenerate eigenvalues, expected (3,1)")]
    Signature {
        positive: usize,
        negative: usize,
        degenerate: usize,
    },
    #[error("diagonal cofactor c{index}{index} = {value} has the wrong sign")]
    CofactorSign { index: usize, value: f64 },
    #[error("edge {edge}: vertex at infinity (diagonal cofactor vanishes)")]
    IdealVertex { edge: usize },
    #[error("edge {edge}: cofactor ratio {ratio} is out of range")]
    Ratio { edge: usize, ratio: f64 },
}

/// The six dihedral angles `A1..A6` in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles6([f64; 6]);

impl Angles6 {
    pub fn new(values: [f64; 6]) -> Result<Self, GramError> {
        for (k, &v) in values.iter().enumerate() {
            if !(v > 0.0 && v < std::f64::consts::PI) {
                return Err(GramError::InvalidAngle {
                    index: k + 1,
                    value: v,
                });
            }
        }
        Ok(Self(values))
    }

    pub fn regular(angle: f64) -> Result<Self, GramError> {
        Self::new([angle; 6])
    }

    pub fn values(&self) -> [f64; 6] {
        self.0
    }
}

/// The six edge lengths `l1..l6`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lengths6([f64; 6]);

impl Lengths6 {
    pub fn new(values: [f64; 6]) -> Result<Self, GramError> {
        for (k, &v) in values.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GramError::InvalidLength {
                    index: k + 1,
                    value: v,
                });
            }
        }
        Ok(Self(values))
    }

    pub fn regular(length: f64) -> Result<Self, GramError> {
        Self::new([length; 6])
    }

    pub fn values(&self) -> [f64; 6] {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Hyperbolic,
    Euclidean,
    Spherical,
    NotRealizable,
}

impl Shape {
    pub fn as_str(&self) -> &'static str {
        match self {
            Shape::Hyperbolic => "hyperbolic",
            Shape::Euclidean => "euclidean",
            Shape::Spherical => "spherical",
            Shape::NotRealizable => "not-realizable",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Angle,
    Length,
}

/// A 4×4 symmetric Gram matrix.
///
/// Length-flavor matrices built by [`gram_from_lengths`] also keep the excess
/// `D = G + J` (entries `2 sinh²(l/2)`), from which determinant and cofactors
/// are evaluated without the cancellation that `cosh l - 1` suffers for
/// short edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gram4 {
    entries: Mat4,
    flavor: Flavor,
    excess: Option<Mat4>,
}

/// `det(G) G⁻¹`, built from 3×3 minors so it exists for singular `G` too.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cofactor4(pub Mat4);

impl Cofactor4 {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }
}

fn symmetric_from_pairs(diagonal: f64, pairs: &[(usize, usize); 6], off: [f64; 6]) -> Mat4 {
    let mut m = [[diagonal; 4]; 4];
    for (&(i, j), v) in pairs.iter().zip(off) {
        m[i][j] = v;
        m[j][i] = v;
    }
    m
}

pub fn gram_from_angles(a: &Angles6) -> Gram4 {
    let off = a.0.map(|x| -x.cos());
    Gram4 {
        entries: symmetric_from_pairs(1.0, &ANGLE_FACES, off),
        flavor: Flavor::Angle,
        excess: None,
    }
}

pub fn gram_from_lengths(l: &Lengths6) -> Gram4 {
    let off = l.0.map(|x| -x.cosh());
    let excess = l.0.map(|x| 2.0 * (0.5 * x).sinh().powi(2));
    Gram4 {
        entries: symmetric_from_pairs(-1.0, &LENGTH_VERTICES, off),
        flavor: Flavor::Length,
        excess: Some(symmetric_from_pairs(0.0, &LENGTH_VERTICES, excess)),
    }
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// 3×3 determinant in doubled working precision: exact products and
/// compensated summation of the six Leibniz terms.
fn det3_compensated(m: [[f64; 3]; 3]) -> f64 {
    const TERMS: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
        ([1, 0, 2], -1.0),
        ([2, 1, 0], -1.0),
    ];
    let (mut sum, mut err) = (0.0, 0.0);
    let mut add = |x: f64| {
        let (s, e) = two_sum(sum, x);
        sum = s;
        err += e;
    };
    for (perm, sign) in TERMS {
        let (h, l) = two_prod(sign * m[0][perm[0]], m[1][perm[1]]);
        let (hh, hl) = two_prod(h, m[2][perm[2]]);
        add(hh);
        add(hl);
        add(l * m[2][perm[2]]);
    }
    sum + err
}

fn submatrix(m: &Mat4, row: usize, col: usize) -> [[f64; 3]; 3] {
    let mut sub = [[0.0; 3]; 3];
    for (r, src_r) in (0..4).filter(|&r| r != row).enumerate() {
        for (c, src_c) in (0..4).filter(|&c| c != col).enumerate() {
            sub[r][c] = m[src_r][src_c];
        }
    }
    sub
}

fn minor(m: &Mat4, row: usize, col: usize) -> f64 {
    det3(submatrix(m, row, col))
}

/// `det(M + 11ᵀ) = det M + Σ cof(M)` (matrix determinant lemma), 3×3.
fn det3_plus_ones(m: [[f64; 3]; 3]) -> f64 {
    let mut cof_sum = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            cof_sum += sign * (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]);
        }
    }
    det3(m) + cof_sum
}

/// Same identity for 4×4.
fn det4_plus_ones(m: &Mat4) -> f64 {
    let mut det = 0.0;
    let mut cof_sum = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let c = sign * minor(m, i, j);
            cof_sum += c;
            if i == 0 {
                det += m[0][j] * c;
            }
        }
    }
    det + cof_sum
}

impl Gram4 {
    /// Wraps an arbitrary symmetric matrix; used by tests and the cofactor
    /// identities, which hold for any square matrix.
    pub fn from_entries(entries: Mat4, flavor: Flavor) -> Self {
        Self {
            entries,
            flavor,
            excess: None,
        }
    }

    pub fn entries(&self) -> &Mat4 {
        &self.entries
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn cofactors(&self) -> Cofactor4 {
        let mut c = [[0.0; 4]; 4];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                *v = match &self.excess {
                    // G = -(D + 11ᵀ); a 3×3 minor picks up (-1)³.
                    Some(d) => -sign * det3_plus_ones(submatrix(d, i, j)),
                    None => sign * det3_compensated(submatrix(&self.entries, i, j)),
                };
            }
        }
        Cofactor4(c)
    }

    pub fn det(&self) -> f64 {
        match &self.excess {
            Some(d) => det4_plus_ones(d),
            None => {
                let c = self.cofactors();
                (0..4).map(|j| self.entries[0][j] * c.0[0][j]).sum()
            }
        }
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn eigen(&self) -> SymmetricEigen {
        jacobi_eigen(&self.entries)
    }

    /// Eigenvalue sign counts; magnitudes below `SIGNATURE_REL·‖G‖` are
    /// degenerate.
    pub fn signature(&self) -> Signature {
        let tol = SIGNATURE_REL * self.norm();
        let eig = self.eigen();
        let mut s = Signature::default();
        for v in eig.values {
            if v.abs() <= tol {
                s.degenerate += 1;
            } else if v > 0.0 {
                s.positive += 1;
            } else {
                s.negative += 1;
            }
        }
        s
    }
}

pub fn cofactors(g: &Gram4) -> Cofactor4 {
    g.cofactors()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub degenerate: usize,
}

impl Signature {
    pub fn is_lorentzian(&self) -> bool {
        self.positive == 3 && self.negative == 1 && self.degenerate == 0
    }
}

/// Eigenvalues (ascending) and matching unit eigenvectors stored as columns.
#[derive(Debug, Clone, Copy)]
pub struct SymmetricEigen {
    pub values: [f64; 4],
    pub vectors: Mat4,
}

/// Cyclic Jacobi rotations for a 4×4 symmetric matrix.
pub fn jacobi_eigen(m: &Mat4) -> SymmetricEigen {
    let mut a = *m;
    let mut v = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();

    for _sweep in 0..64 {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-300 || off <= f64::EPSILON * 1e-2 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let mut values = [0.0; 4];
    let mut vectors = [[0.0; 4]; 4];
    for (col, &src) in order.iter().enumerate() {
        values[col] = a[src][src];
        for row in 0..4 {
            vectors[row][col] = v[row][src];
        }
    }
    SymmetricEigen { values, vectors }
}

pub fn classify(a: &Angles6) -> Shape {
    let g = gram_from_angles(a);
    let norm = g.norm();
    let zero = SIGNATURE_REL * norm;
    let eps_cof = COFACTOR_REL * norm.powi(3);
    let eig = g.eigen().values;
    if eig[1] <= zero {
        return Shape::NotRealizable;
    }
    let c = g.cofactors();
    if eig[0] < -zero {
        // Vertex links must be spherical or Euclidean (ideal) triangles and all
        // vertices on one sheet.
        let links_ok = (0..4).all(|i| c.0[i][i] >= -eps_cof);
        let sheet_ok = LENGTH_VERTICES.iter().all(|&(i, j)| c.0[i][j] > 0.0);
        if links_ok && sheet_ok {
            Shape::Hyperbolic
        } else {
            Shape::NotRealizable
        }
    } else if eig[0] <= zero {
        if (0..4).all(|i| c.0[i][i] > eps_cof) {
            Shape::Euclidean
        } else {
            Shape::NotRealizable
        }
    } else {
        Shape::Spherical
    }
}

/// Edge lengths of a hyperbolic tetrahedron from its dihedral angles via
/// `cosh l = c_ij / sqrt(c_ii c_jj)` on the angle cofactors, where `(i, j)`
/// is the vertex pair of the edge.
pub fn angles_to_lengths(a: &Angles6) -> Result<Lengths6, GramError> {
    match classify(a) {
        Shape::Hyperbolic => {}
        Shape::NotRealizable => return Err(GramError::NotRealizable),
        other => return Err(GramError::NotHyperbolic(other)),
    }
    let g = gram_from_angles(a);
    let c = g.cofactors();
    let eps_cof = COFACTOR_REL * g.norm().powi(3);
    let mut out = [0.0; 6];
    for (k, &(i, j)) in LENGTH_VERTICES.iter().enumerate() {
        let (cii, cjj) = (c.0[i][i], c.0[j][j]);
        if cii <= eps_cof || cjj <= eps_cof {
            return Err(GramError::IdealVertex { edge: k + 1 });
        }
        let ratio = c.0[i][j] / (cii * cjj).sqrt();
        if !(ratio > 1.0) || !ratio.is_finite() {
            return Err(GramError::Ratio { edge: k + 1, ratio });
        }
        out[k] = ratio.acosh();
    }
    Lengths6::new(out)
}

/// Checks that `G_l` has signature (3,1), i.e. that the six lengths bound a
/// hyperbolic tetrahedron.
pub fn check_lengths(l: &Lengths6) -> Result<Gram4, GramError> {
    let g = gram_from_lengths(l);
    let s = g.signature();
    if !s.is_lorentzian() {
        return Err(GramError::Signature {
            positive: s.positive,
            negative: s.negative,
            degenerate: s.degenerate,
        });
    }
    Ok(g)
}

/// Dihedral angles from edge lengths via `cos A = c_ij / sqrt(c_ii c_jj)` on
/// the length cofactors, where `(i, j)` is the face pair of the edge.
pub fn lengths_to_angles(l: &Lengths6) -> Result<Angles6, GramError> {
    let g = check_lengths(l)?;
    let c = g.cofactors();
    let det = g.det();
    // ⟨u_i, v_i⟩ = -sqrt(det / c_ii) needs c_ii of the same sign as det (< 0).
    for i in 0..4 {
        if !(c.0[i][i] * det > 0.0) {
            return Err(GramError::CofactorSign {
                index: i + 1,
                value: c.0[i][i],
            });
        }
    }
    let mut out = [0.0; 6];
    for (k, &(i, j)) in ANGLE_FACES.iter().enumerate() {
        let ratio = c.0[i][j] / (c.0[i][i] * c.0[j][j]).sqrt();
        if !(ratio.abs() < 1.0) {
            return Err(GramError::Ratio { edge: k + 1, ratio });
        }
        out[k] = ratio.acos();
    }
    Angles6::new(out)
}

/// Index of the edge joining vertices `i` and `j` (0-based, `i != j`).
pub fn edge_of_vertices(i: usize, j: usize) -> usize {
    let key = (i.min(j), i.max(j));
    LENGTH_VERTICES
        .iter()
        .position(|&p| p == key)
        .expect("distinct vertices in 0..4")
}

/// Relabels the tetrahedron so that new vertex (and face) `i` is old vertex
/// `perm[i]`.
pub fn relabel(values: [f64; 6], perm: [usize; 4]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (k, &(i, j)) in LENGTH_VERTICES.iter().enumerate() {
        out[k] = values[edge_of_vertices(perm[i], perm[j])];
    }
    out
}

/// All 24 permutations of the four vertices.
pub fn vertex_permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    p.iter().for_each(|&x| seen[x] = true);
                    if seen.iter().all(|&s| s) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Minkowski product with signature (+,+,+,-); the last coordinate is time.
pub fn minkowski(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]
}

/// Four vertices on the upper sheet of the hyperboloid `⟨v, v⟩ = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkowskiVertices(pub [[f64; 4]; 4]);

impl MinkowskiVertices {
    pub fn gram(&self) -> Mat4 {
        let mut g = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] = minkowski(&self.0[i], &self.0[j]);
            }
        }
        g
    }

    /// Applies a linear map given as a row-major matrix to every vertex.
    pub fn transform(&self, m: &Mat4) -> MinkowskiVertices {
        MinkowskiVertices(self.0.map(|v| {
            let mut out = [0.0; 4];
            for (r, row) in m.iter().enumerate() {
                out[r] = (0..4).map(|c| row[c] * v[c]).sum();
            }
            out
        }))
    }

    /// Moves the normalized vertex barycenter to `(0, 0, 0, 1)` by the
    /// Minkowski reflection in `c - e4`, an isometry of the upper sheet.
    pub fn centered(&self) -> MinkowskiVertices {
        let mut c = [0.0; 4];
        for v in &self.0 {
            for k in 0..4 {
                c[k] += v[k];
            }
        }
        let n = (-minkowski(&c, &c)).sqrt();
        let c = c.map(|x| x / n);
        let w = [c[0], c[1], c[2], c[3] - 1.0];
        let ww = minkowski(&w, &w);
        if ww <= 1e-300 {
            return *self;
        }
        MinkowskiVertices(self.0.map(|v| {
            let f = 2.0 * minkowski(&v, &w) / ww;
            [
                v[0] - f * w[0],
                v[1] - f * w[1],
                v[2] - f * w[2],
                v[3] - f * w[3],
            ]
        }))
    }
}

/// Realizes `G_l` by four vectors of Minkowski space: with `G = Q Λ Qᵀ`
/// (negative eigenvalue last), vertex `i` has coordinates `sqrt|λ_r| Q_ir`.
pub fn embed_vertices(l: &Lengths6) -> Result<MinkowskiVertices, GramError> {
    let g = check_lengths(l)?;
    let eig = g.eigen();
    // Ascending order puts the single negative eigenvalue first; move it to
    // the time slot.
    let slots = [1usize, 2, 3, 0];
    let mut verts = [[0.0; 4]; 4];
    for (i, v) in verts.iter_mut().enumerate() {
        for (coord, &col) in slots.iter().enumerate() {
            v[coord] = eig.values[col].abs().sqrt() * eig.vectors[i][col];
        }
    }
    if verts[0][3] < 0.0 {
        for v in verts.iter_mut() {
            v[3] = -v[3];
        }
    }
    Ok(MinkowskiVertices(verts))
}

/// Four points of the open unit ball (Klein model).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleinTetrahedron(pub [[f64; 3]; 4]);

/// Central projection `x ↦ (x1, x2, x3) / x4`.
pub fn to_klein(v: &MinkowskiVertices) -> KleinTetrahedron {
    KleinTetrahedron(v.0.map(|x| [x[0] / x[3], x[1] / x[3], x[2] / x[3]]))
}
