//! Exact rational linear algebra over the Picard lattice of a blown-up
//! surface.
//!
//! Every lattice used here has an explicit basis: the generators of the base
//! surface (`H` for the plane, `C0, f` for ruled surfaces) followed by the
//! total transforms `E_1, .., E_n` of the exceptional curves. The Gram matrix
//! is block diagonal with `E_i^2 = -1`, so it depends only on the base kind
//! and the number of blow-ups, which is what [`LatticeId`] records.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::surface::BaseKind;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Identifies the lattice a class lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeId {
    pub base: BaseKind,
    pub blowups: usize,
}

impl LatticeId {
    pub fn base_rank(&self) -> usize {
        self.base.picard_rank()
    }

    pub fn rank(&self) -> usize {
        self.base_rank() + self.blowups
    }

    /// Lattice after one more blow-up.
    pub fn next(&self) -> LatticeId {
        LatticeId {
            base: self.base,
            blowups: self.blowups + 1,
        }
    }

    /// Entry `(i, j)` of the Gram matrix.
    pub fn gram(&self, i: usize, j: usize) -> i64 {
        let b = self.base_rank();
        match (i < b, j < b) {
            (true, true) => self.base.gram(i, j),
            (false, false) if i == j => -1,
            _ => 0,
        }
    }
}

/// A divisor class with exact rational coordinates in the basis of one
/// lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    lattice: LatticeId,
    coords: Vec<Rational>,
}

impl DivisorClass {
    pub fn new(lattice: LatticeId, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != lattice.rank() {
            return Err(Error::InvalidParameters(format!(
                "class has {} coordinates, lattice rank is {}",
                coords.len(),
                lattice.rank()
            )));
        }
        Ok(DivisorClass { lattice, coords })
    }

    pub fn from_ints(lattice: LatticeId, coords: &[i64]) -> Result<Self> {
        Self::new(lattice, coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(lattice: LatticeId) -> Self {
        DivisorClass {
            lattice,
            coords: vec![Rational::zero(); lattice.rank()],
        }
    }

    /// The `index`-th basis vector.
    pub fn basis(lattice: LatticeId, index: usize) -> Self {
        let mut class = Self::zero(lattice);
        class.coords[index] = Rational::one();
        class
    }

    pub fn lattice(&self) -> LatticeId {
        self.lattice
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Intersection pairing. Panics on a lattice mismatch; use [`intersect`]
    /// for a checked version.
    pub fn dot(&self, other: &DivisorClass) -> Rational {
        intersect(self, other).expect("incompatible surfaces")
    }

    pub fn square(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, factor: &Rational) -> DivisorClass {
        DivisorClass {
            lattice: self.lattice,
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.combine(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.combine(other, |a, b| a - b)
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: &Rational, other: &DivisorClass) -> DivisorClass {
        self.combine(other, |a, b| a + factor * b)
            .expect("incompatible surfaces")
    }

    fn combine(
        &self,
        other: &DivisorClass,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<DivisorClass> {
        if self.lattice != other.lattice {
            return Err(Error::IncompatibleSurfaces);
        }
        Ok(DivisorClass {
            lattice: self.lattice,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }

    /// Pullback along one blow-up: the new exceptional coordinate is zero.
    pub fn pullback(&self) -> DivisorClass {
        let mut coords = self.coords.clone();
        coords.push(Rational::zero());
        DivisorClass {
            lattice: self.lattice.next(),
            coords,
        }
    }

    /// Pullback along `steps` blow-ups.
    pub fn pullback_by(&self, steps: usize) -> DivisorClass {
        (0..steps).fold(self.clone(), |c, _| c.pullback())
    }

    /// Renders the class against basis names, e.g. `3H - E1 - 1/2 E2`.
    pub fn display_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (coef, name) in self.coords.iter().zip(names) {
            if coef.is_zero() {
                continue;
            }
            let negative = coef.is_negative();
            let magnitude = coef.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if magnitude.is_one() {
                out.push_str(name);
            } else if magnitude.is_integer() {
                out.push_str(&format!("{magnitude}{name}"));
            } else {
                out.push_str(&format!("{magnitude} {name}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The lattice pairing. Symmetric and bilinear.
pub fn intersect(d1: &DivisorClass, d2: &DivisorClass) -> Result<Rational> {
    if d1.lattice != d2.lattice {
        return Err(Error::IncompatibleSurfaces);
    }
    let lattice = d1.lattice;
    let b = lattice.base_rank();
    let mut total = Rational::zero();
    for i in 0..b {
        for j in 0..b {
            let g = lattice.gram(i, j);
            if g != 0 && !d1.coords[i].is_zero() && !d2.coords[j].is_zero() {
                total += &d1.coords[i] * &d2.coords[j] * int(g);
            }
        }
    }
    for (x, y) in d1.coords[b..].iter().zip(&d2.coords[b..]) {
        total -= x * y;
    }
    Ok(total)
}

/// Square matrix of pairwise intersection numbers for an ordered list of
/// curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub curve_ids: Vec<String>,
    pub entries: Vec<Vec<Rational>>,
}

impl IntersectionMatrix {
    pub fn new(curve_ids: Vec<String>, entries: Vec<Vec<Rational>>) -> Result<Self> {
        let n = curve_ids.len();
        if entries.len() != n || entries.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameters(
                "intersection matrix must be square and match its curve list".into(),
            ));
        }
        Ok(IntersectionMatrix { curve_ids, entries })
    }

    /// Unlabelled matrix from integer entries; ids are `0, 1, ..`.
    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let entries: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| row.iter().map(|&v| int(v)).collect())
            .collect();
        IntersectionMatrix {
            curve_ids: (0..rows.len()).map(|i| i.to_string()).collect(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// `M x`.
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x^T M x`.
    pub fn quadratic_form(&self, x: &[Rational]) -> Rational {
        self.apply(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// Scales each row by the lcm of its denominators, giving an integer matrix
/// with the same row space.
fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter()
                .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Leading principal minors of `rows`, computed by fraction-free (Bareiss)
/// elimination without row exchanges. The scan stops at the first vanishing
/// minor; later minors are not needed by any caller.
fn leading_minors(rows: &[Vec<Rational>]) -> Vec<BigInt> {
    let n = rows.len();
    // Uniform scaling by a positive integer keeps every minor's sign.
    let common = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scale = Rational::from_integer(common);
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| row.iter().map(|v| (v * &scale).to_integer()).collect())
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let value = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = value;
            }
        }
        prev = pivot;
    }
    minors
}

/// Sylvester's criterion: the leading principal minors alternate in sign,
/// starting negative. The empty matrix is vacuously negative definite.
pub fn is_negative_definite(m: &IntersectionMatrix) -> bool {
    if !m.is_symmetric() {
        return false;
    }
    let minors = leading_minors(&m.entries);
    minors.len() == m.dim()
        && minors.iter().enumerate().all(|(k, d)| {
            if k % 2 == 0 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        })
}

/// Exact determinant by fraction-free elimination with first-nonzero pivoting.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    if n == 0 {
        return Rational::one();
    }
    let common = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scale = Rational::from_integer(common.clone());
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| row.iter().map(|v| (v * &scale).to_integer()).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Rational::new(sign * prev, num_traits::pow(common, n))
}

/// Solves `m x = rhs` exactly.
///
/// Fraction-free Gaussian elimination on the integer-scaled augmented matrix,
/// pivoting on the first nonzero entry of each column, then rational back
/// substitution.
pub fn solve_linear(m: &IntersectionMatrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    if rhs.len() != m.dim() {
        return Err(Error::InvalidParameters(format!(
            "right-hand side has length {}, matrix has dimension {}",
            rhs.len(),
            m.dim()
        )));
    }
    let x = solve_rows(&m.entries, rhs)?;
    debug_assert_eq!(m.apply(&x), rhs, "back-substitution check failed");
    Ok(x)
}

pub(crate) fn solve_rows(rows: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = rows.len();
    let augmented: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut a = integer_rows(&augmented);
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n)
            .find(|&r| !a[r][k].is_zero())
            .ok_or(Error::DegenerateConfiguration)?;
        a.swap(p, k);
        for i in k + 1..n {
            for j in k + 1..=n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(a[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(a[i][i].clone());
    }
    Ok(x)
}
