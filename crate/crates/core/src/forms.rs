//! Positive definite binary and ternary quadratic forms with exact rational
//! entries, plus the lattice invariants `G0` and `G1` of the inverse form.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{format_rational, parse_rational, rational_to_f64, ExactInt};
use crate::error::{Error, Result};

/// Ambient dimension of a form or body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn get(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    pub fn from_usize(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            other => Err(Error::BadDimension(other)),
        }
    }
}

/// `Q(x) = x A xᵀ` with `A` symmetric positive definite and rational.
///
/// The determinant and the exact inverse `A⁻¹` are computed once at
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    dim: Dimension,
    entries: Vec<Vec<BigRational>>,
    det: BigRational,
    inverse: Vec<Vec<BigRational>>,
}

impl QuadraticForm {
    /// Validates symmetry and positive definiteness (all leading principal
    /// minors strictly positive).
    pub fn new(entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let dim = Dimension::from_usize(entries.len())?;
        let n = dim.get();
        if entries.iter().any(|row| row.len() != n) {
            return Err(Error::BadDimension(entries.iter().map(Vec::len).max().unwrap_or(0)));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        let minors = leading_minors(&entries);
        for (index, minor) in minors.iter().enumerate() {
            if !minor.is_positive() {
                return Err(Error::NotPositiveDefinite {
                    index: index + 1,
                    value: format_rational(minor),
                });
            }
        }
        let det = minors[n - 1].clone();
        let inverse = adjugate(&entries)
            .into_iter()
            .map(|row| row.into_iter().map(|x| x / &det).collect())
            .collect();
        Ok(QuadraticForm { dim, entries, det, inverse })
    }

    /// Parse a matrix of rational strings (`"p/q"` or `"p"`).
    pub fn from_strings<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        QuadraticForm::new(entries)
    }

    pub fn identity(dim: Dimension) -> Self {
        let n = dim.get();
        let diag = vec![BigRational::one(); n];
        QuadraticForm::diagonal(&diag).expect("identity is positive definite")
    }

    pub fn diagonal(diag: &[BigRational]) -> Result<Self> {
        let n = diag.len();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { diag[i].clone() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        QuadraticForm::new(entries)
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    pub fn det(&self) -> &BigRational {
        &self.det
    }

    pub fn inverse(&self) -> &[Vec<BigRational>] {
        &self.inverse
    }

    pub fn is_identity(&self) -> bool {
        *self == QuadraticForm::identity(self.dim)
    }

    /// `Q(v) = v A vᵀ`, exactly.
    pub fn evaluate(&self, v: &[BigRational]) -> Result<BigRational> {
        self.check_len(v.len())?;
        Ok(eval_matrix(&self.entries, v))
    }

    /// `Q⁻¹(v) = v A⁻¹ vᵀ = g(v)²`, exactly.
    pub fn evaluate_inverse(&self, v: &[BigRational]) -> Result<BigRational> {
        self.check_len(v.len())?;
        Ok(eval_matrix(&self.inverse, v))
    }

    fn check_len(&self, got: usize) -> Result<()> {
        let expected = self.dim.get();
        if got != expected {
            return Err(Error::DimensionMismatch { expected, got });
        }
        Ok(())
    }

    /// The integer matrix `L·A` together with `L`, the least common multiple
    /// of all entry denominators. `Q(k) ≤ T` iff `kᵀ(L·A)k ≤ ⌊L·T⌋` for integer `k`.
    pub fn integer_scaled(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        scale_to_integers(&self.entries)
    }

    /// Same as [`integer_scaled`](Self::integer_scaled) for `A⁻¹`.
    pub fn inverse_integer_scaled(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        scale_to_integers(&self.inverse)
    }

    /// Minimum of `Q⁻¹(k)` over nonzero integer vectors together with a
    /// minimizing vector.
    ///
    /// Starts from the best unit vector; any vector `k` with `Q⁻¹(k) ≤ λ`
    /// satisfies `k_i² ≤ λ·A_ii` (the inverse of `A⁻¹` is `A`), so scanning
    /// that box is exhaustive.
    pub fn shortest_support(&self) -> (BigRational, Vec<i64>) {
        let n = self.dim.get();
        let (scaled, denom) = self.inverse_integer_scaled();
        let p: Vec<Vec<i128>> = to_i128_matrix(&scaled);

        let (first, _) = (0..n)
            .map(|i| (i, &self.inverse[i][i]))
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("dimension is at least 2");
        let mut witness = vec![0i64; n];
        witness[first] = 1;
        let mut best = eval_i128(&p, &witness);

        let candidate = BigRational::new(BigInt::from(best), denom.clone());
        let radii: Vec<i64> = (0..n)
            .map(|i| {
                let bound = &candidate * &self.entries[i][i];
                bound.floor().to_integer().floor_sqrt().to_i64().expect("desk-scale radius")
            })
            .collect();

        let mut k: Vec<i64> = radii.iter().map(|r| -r).collect();
        loop {
            if k.iter().any(|&x| x != 0) {
                let value = eval_i128(&p, &k);
                if value < best {
                    best = value;
                    witness.clone_from(&k);
                }
            }
            if !odometer_step(&mut k, &radii) {
                break;
            }
        }
        (BigRational::new(BigInt::from(best), denom), witness)
    }

    /// Maximum of `Q⁻¹(w)` over the corners `w ∈ {±1/2}^dim`.
    ///
    /// Corners come in pairs `±w` with equal value, so only those with a
    /// positive first coordinate are evaluated.
    pub fn corner_support_max(&self) -> BigRational {
        let n = self.dim.get();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        (0..1usize << (n - 1))
            .map(|mask| {
                let w: Vec<BigRational> = (0..n)
                    .map(|i| {
                        if i > 0 && mask & (1 << (i - 1)) != 0 {
                            -half.clone()
                        } else {
                            half.clone()
                        }
                    })
                    .collect();
                eval_matrix(&self.inverse, &w)
            })
            .max()
            .expect("at least one corner")
    }

    /// `det^(1/(2·dim))`: the factor mapping this form onto its determinant-one
    /// normalization `A' = A / det^(1/dim)`, under which `t' = t/scale` and
    /// `g' = scale·g`.
    pub fn normalization_scale(&self) -> f64 {
        rational_to_f64(&self.det).powf(1.0 / (2.0 * self.dim.get() as f64))
    }

    /// Volume of the body `Q ≤ 1`: `π/√det` or `(4π/3)/√det`.
    pub fn unit_volume(&self) -> f64 {
        let sqrt_det = rational_to_f64(&self.det).sqrt();
        match self.dim {
            Dimension::Two => PI / sqrt_det,
            Dimension::Three => 4.0 * PI / 3.0 / sqrt_det,
        }
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(format_rational).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// `G0`, `G1` and the normalization data consumed by the ellipsoid and
/// ellipse bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllipsoidInvariants {
    pub dim: Dimension,
    pub g0: f64,
    #[serde(serialize_with = "ser_rational")]
    pub g0_sq: BigRational,
    pub witness: Vec<i64>,
    pub g1: f64,
    #[serde(serialize_with = "ser_rational")]
    pub g1_sq: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub det: BigRational,
    pub scale: f64,
}

impl EllipsoidInvariants {
    pub fn compute(form: &QuadraticForm) -> Self {
        let (g0_sq, witness) = form.shortest_support();
        let g1_sq = form.corner_support_max();
        EllipsoidInvariants {
            dim: form.dim(),
            g0: rational_to_f64(&g0_sq).sqrt(),
            g0_sq,
            witness,
            g1: rational_to_f64(&g1_sq).sqrt(),
            g1_sq,
            det: form.det().clone(),
            scale: form.normalization_scale(),
        }
    }

    /// `G0` of the determinant-one normalization.
    pub fn normalized_g0(&self) -> f64 {
        self.scale * self.g0
    }

    /// `G1` of the determinant-one normalization.
    pub fn normalized_g1(&self) -> f64 {
        self.scale * self.g1
    }
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

/// Volume-based majorant for the number of nonzero lattice points with
/// support value at most `u`: `(4π/3)(u+G1)³ − 1` in 3D, `π(u+G1)² − 1` in 2D.
pub fn counting_majorant(u: f64, g1: f64, dim: Dimension) -> f64 {
    match dim {
        Dimension::Two => PI * (u + g1).powi(2) - 1.0,
        Dimension::Three => 4.0 * PI / 3.0 * (u + g1).powi(3) - 1.0,
    }
}

fn leading_minors(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let m1 = a[0][0].clone();
    let m2 = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    if a.len() == 2 {
        return vec![m1, m2];
    }
    vec![m1, m2, det3(a)]
}

fn det3(a: &[Vec<BigRational>]) -> BigRational {
    &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
        - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
        + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
}

fn adjugate(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    if a.len() == 2 {
        return vec![
            vec![a[1][1].clone(), -a[0][1].clone()],
            vec![-a[1][0].clone(), a[0][0].clone()],
        ];
    }
    let cofactor = |i: usize, j: usize| {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let minor = &a[rows[0]][cols[0]] * &a[rows[1]][cols[1]]
            - &a[rows[0]][cols[1]] * &a[rows[1]][cols[0]];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    // adj(A)_{ij} = cofactor_{ji}
    (0..3).map(|i| (0..3).map(|j| cofactor(j, i)).collect()).collect()
}

fn eval_matrix(m: &[Vec<BigRational>], v: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            acc += entry * &v[i] * &v[j];
        }
    }
    acc
}

fn scale_to_integers(m: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let lcm = m
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled = m
        .iter()
        .map(|row| row.iter().map(|x| (x * &lcm).to_integer()).collect())
        .collect();
    (scaled, lcm)
}

pub(crate) fn to_i128_matrix(m: &[Vec<BigInt>]) -> Vec<Vec<i128>> {
    m.iter()
        .map(|row| row.iter().map(|x| x.to_i128().expect("desk-scale matrix entry")).collect())
        .collect()
}

pub(crate) fn eval_i128(m: &[Vec<i128>], k: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, row) in m.iter().enumerate() {
        for (j, &entry) in row.iter().enumerate() {
            acc += entry * k[i] as i128 * k[j] as i128;
        }
    }
    acc
}

/// Advance `k` through the box `[-r, r]` in lexicographic order; `false` once exhausted.
pub(crate) fn odometer_step(k: &mut [i64], radii: &[i64]) -> bool {
    for i in (0..k.len()).rev() {
        if k[i] < radii[i] {
            k[i] += 1;
            return true;
        }
        k[i] = -radii[i];
    }
    false
}
