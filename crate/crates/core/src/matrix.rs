//! Dyadic matrices and the vector form of the n-point recursion.
//!
//! Every matrix here has entries whose denominators are powers of two, so
//! a matrix is stored as integer numerators over one shared `2^exp`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::correlator::Correlator;
use crate::error::{Error, Result};
use crate::lags::CornerTuple;
use crate::npoint::corner_value;
use crate::rational::{format_exact, int, Rational};
use crate::sequence::t;

/// Square matrix with entries `numerators / 2^exp`, kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    dim: usize,
    nums: Vec<BigInt>,
    exp: u32,
}

impl RationalMatrix {
    /// Builds `rows / 2^exp` from integer rows.
    pub fn from_rows(rows: &[&[i64]], exp: u32) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        let nums = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| BigInt::from(v)))
            .collect();
        RationalMatrix { dim, nums, exp }.normalized()
    }

    pub fn zeros(dim: usize) -> Self {
        RationalMatrix {
            dim,
            nums: vec![BigInt::zero(); dim * dim],
            exp: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.nums[i * dim + i] = BigInt::one();
        }
        m
    }

    /// The anti-diagonal exchange matrix.
    pub fn exchange(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.nums[i * dim + (dim - 1 - i)] = BigInt::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exponent `k` of the shared denominator `2^k`.
    pub fn denominator_exp(&self) -> u32 {
        self.exp
    }

    pub fn numerator(&self, i: usize, j: usize) -> &BigInt {
        &self.nums[i * self.dim + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.numerator(i, j).clone(), BigInt::one() << self.exp)
    }

    fn normalized(mut self) -> Self {
        if self.nums.iter().all(Zero::is_zero) {
            self.exp = 0;
            return self;
        }
        while self.exp > 0 && self.nums.iter().all(|v| v.is_even()) {
            for v in &mut self.nums {
                *v >>= 1;
            }
            self.exp -= 1;
        }
        self
    }

    fn rescaled(&self, exp: u32) -> Vec<BigInt> {
        let shift = exp - self.exp;
        self.nums.iter().map(|v| v << shift).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let exp = self.exp.max(other.exp);
        let nums = self
            .rescaled(exp)
            .into_iter()
            .zip(other.rescaled(exp))
            .map(|(a, b)| a + b)
            .collect();
        RationalMatrix {
            dim: self.dim,
            nums,
            exp,
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        RationalMatrix {
            dim: self.dim,
            nums: self.nums.iter().map(|v| -v).collect(),
            exp: self.exp,
        }
    }

    /// Multiplies by `2^-k`.
    pub fn halve(&self, k: u32) -> Self {
        RationalMatrix {
            dim: self.dim,
            nums: self.nums.clone(),
            exp: self.exp + k,
        }
        .normalized()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut nums = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.nums[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.nums[k * d + j];
                    if !b.is_zero() {
                        nums[i * d + j] += a * b;
                    }
                }
            }
        }
        RationalMatrix {
            dim: d,
            nums,
            exp: self.exp + other.exp,
        }
        .normalized()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (self.dim, other.dim);
        let d = p * q;
        let mut nums = vec![BigInt::zero(); d * d];
        for i in 0..p {
            for j in 0..p {
                let a = &self.nums[i * p + j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..q {
                    for l in 0..q {
                        nums[(i * q + k) * d + (j * q + l)] = a * &other.nums[k * q + l];
                    }
                }
            }
        }
        RationalMatrix {
            dim: d,
            nums,
            exp: self.exp + other.exp,
        }
        .normalized()
    }

    /// `A' = J A J` with `J` the exchange matrix of matching size.
    pub fn conjugate(&self) -> Self {
        let d = self.dim;
        let mut nums = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                nums[i * d + j] = self.nums[(d - 1 - i) * d + (d - 1 - j)].clone();
            }
        }
        RationalMatrix {
            dim: d,
            nums,
            exp: self.exp,
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.dim);
        let scale = Rational::new(BigInt::one(), BigInt::one() << self.exp);
        (0..self.dim)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.numerator(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += x * Rational::from_integer(a.clone());
                    }
                }
                acc * &scale
            })
            .collect()
    }

    /// Row-major CSV, one line per row, entries as `num/den`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| format_exact(&self.get(i, j)))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "2^-{} *", self.exp)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| self.numerator(i, j).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Row vector with dyadic entries, used for `e₁ᵀ B ⋯ B` products.
#[derive(Clone, Debug)]
struct DyadicRow {
    nums: Vec<BigInt>,
    exp: u32,
}

impl DyadicRow {
    fn unit(dim: usize) -> Self {
        let mut nums = vec![BigInt::zero(); dim];
        nums[0] = BigInt::one();
        DyadicRow { nums, exp: 0 }
    }

    fn times(&self, m: &RationalMatrix) -> Self {
        let d = m.dim;
        let mut nums = vec![BigInt::zero(); d];
        for (k, a) in self.nums.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, out) in nums.iter_mut().enumerate() {
                let b = m.numerator(k, j);
                if !b.is_zero() {
                    *out += a * b;
                }
            }
        }
        let mut exp = self.exp + m.exp;
        while exp > 0 && nums.iter().all(|v| v.is_even()) {
            for v in &mut nums {
                *v >>= 1;
            }
            exp -= 1;
        }
        DyadicRow { nums, exp }
    }

    fn first(&self) -> Rational {
        Rational::new(self.nums[0].clone(), BigInt::one() << self.exp)
    }
}

/// `(E₀, E₁, J)`: the two elementary matrices followed by the exchange matrix.
pub fn elementary_matrices() -> (RationalMatrix, RationalMatrix, RationalMatrix) {
    let e0 = RationalMatrix::from_rows(&[&[1, 0], &[0, -1]], 0);
    let e1 = RationalMatrix::from_rows(&[&[0, -1], &[0, 1]], 0);
    let j = RationalMatrix::exchange(2);
    (e0, e1, j)
}

/// The two 2×2 matrices of the pair recursion,
/// `(η(2m+b), η(2m+b+1))ᵀ = M_b (η(m), η(m+1))ᵀ`.
pub fn pair_recursion_matrices() -> [RationalMatrix; 2] {
    [
        RationalMatrix::from_rows(&[&[2, 0], &[-1, -1]], 1),
        RationalMatrix::from_rows(&[&[-1, -1], &[0, 2]], 1),
    ]
}

fn check_bits(bits: &[u8], n: usize) -> Result<()> {
    if n < 2 || bits.len() != n - 1 || bits.iter().any(|&b| b > 1) {
        return Err(Error::InvalidArgument(format!(
            "order {n} needs {} bits in {{0,1}}, got {bits:?}",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

/// `B = ½((-1)^n E_{i₁} ⊗ ⋯ ⊗ E_{i_{n-1}} + E'_{1-i₁} ⊗ ⋯ ⊗ E'_{1-i_{n-1}})`.
///
/// The sign sits on the unprimed product. Placing it on the primed product
/// instead gives the same matrix for even `n` but its negative for odd `n`,
/// which no longer matches the scalar reduction.
pub fn b_matrix_kronecker(bits: &[u8], n: usize) -> Result<RationalMatrix> {
    check_bits(bits, n)?;
    let (e0, e1, _) = elementary_matrices();
    let e = [e0, e1];
    let primed = [e[0].conjugate(), e[1].conjugate()];
    let mut direct = RationalMatrix::identity(1);
    let mut swapped = RationalMatrix::identity(1);
    for &b in bits {
        direct = direct.kron(&e[b as usize]);
        swapped = swapped.kron(&primed[1 - b as usize]);
    }
    if n % 2 == 1 {
        direct = direct.neg();
    }
    Ok(direct.add(&swapped).halve(1))
}

/// The same matrix read off the scalar reduction: component `s` of
/// `𝛈(2m + r)` is `η(2m + r + s)`, rewritten as `η(2(m + q) + p)` and reduced.
pub fn b_matrix_recursion(bits: &[u8], n: usize) -> Result<RationalMatrix> {
    check_bits(bits, n)?;
    let k = n - 1;
    let dim = 1usize << k;
    let mut nums = vec![0i64; dim * dim];
    for s in 0..dim {
        let mut q = 0usize;
        let mut p = 0usize;
        for (i, &r) in bits.iter().enumerate() {
            let shift = k - 1 - i;
            let total = r as usize + ((s >> shift) & 1);
            q |= (total >> 1) << shift;
            p |= (total & 1) << shift;
        }
        let sign = if p.count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        };
        let sign_n = if n.is_multiple_of(2) { 1 } else { -1 };
        // Numerators over 2.
        nums[s * dim + q] += sign;
        nums[s * dim + (q | p)] += sign * sign_n;
    }
    let rows: Vec<&[i64]> = nums.chunks(dim).collect();
    Ok(RationalMatrix::from_rows(&rows, 1))
}

/// Bits `(r₁, …, r_{n-1})` of index `i`, `r₁` most significant.
pub fn index_bits(i: usize, n: usize) -> Vec<u8> {
    CornerTuple::from_mask(i as u64, n - 1).bits().to_vec()
}

/// All `2^{n-1}` B-matrices in index order.
pub fn b_matrices(n: usize) -> Result<Vec<RationalMatrix>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "order must be at least 2, got {n}"
        )));
    }
    (0..1usize << (n - 1))
        .map(|i| b_matrix_kronecker(&index_bits(i, n), n))
        .collect()
}

/// Sum of all B-matrices of order `n`: idempotent for even `n`, square-zero
/// for odd `n`.
pub fn b_sum(n: usize) -> Result<RationalMatrix> {
    let mats = b_matrices(n)?;
    let mut acc = RationalMatrix::zeros(mats[0].dim());
    for m in &mats {
        acc = acc.add(m);
    }
    Ok(acc)
}

/// `𝛈(m₁,…,m_{n-1})`: the correlations at the `2^{n-1}` corner offsets of
/// a base tuple, `r₁` as the most significant offset bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaVector {
    pub order: usize,
    pub base: Vec<u64>,
    pub components: Vec<Rational>,
}

impl EtaVector {
    /// Lags of the component at `offset`.
    pub fn lags_at(&self, offset: usize) -> Vec<u64> {
        let k = self.order - 1;
        self.base
            .iter()
            .enumerate()
            .map(|(i, &m)| m + ((offset >> (k - 1 - i)) & 1) as u64)
            .collect()
    }
}

/// Builds `𝛈(base)` from `𝛈(0,…,0)` by applying one B-matrix per joint
/// binary digit of the base lags, most significant digit first.
pub fn eta_vector(base: &[u64]) -> Result<EtaVector> {
    if base.is_empty() {
        return Err(Error::InvalidArgument(
            "base tuple must be non-empty".into(),
        ));
    }
    let n = base.len() + 1;
    let mats = b_matrices(n)?;
    let dim = 1usize << (n - 1);
    let mut v: Vec<Rational> = (0..dim)
        .map(|i| corner_value(&CornerTuple::from_mask(i as u64, n - 1)))
        .collect();
    let depth = base
        .iter()
        .map(|&m| 64 - m.leading_zeros())
        .max()
        .unwrap_or(0);
    for j in (0..depth).rev() {
        let index = base
            .iter()
            .fold(0usize, |acc, &m| (acc << 1) | ((m >> j) & 1) as usize);
        v = mats[index].mul_vec(&v);
    }
    Ok(EtaVector {
        order: n,
        base: base.to_vec(),
        components: v,
    })
}

/// Digits of `m` in base `2^{n-1}`, least significant first; `0` is `[0]`.
pub fn regseq_digits(n: usize, m: &BigUint) -> Vec<usize> {
    let width = (n - 1) as u64;
    let mut digits = Vec::new();
    let bits = m.bits();
    let mut pos = 0;
    while pos < bits.max(1) {
        let mut d = 0usize;
        for b in 0..width {
            if pos + b < bits && m.bit(pos + b) {
                d |= 1 << b;
            }
        }
        digits.push(d);
        pos += width;
    }
    digits
}

/// The `2^{n-1}`-regular sequence `η_n(m) = e₁ᵀ B_{i₀} B_{i₁} ⋯ B_{i_s} e₁`.
#[derive(Clone, Debug)]
pub struct RegularSequence {
    n: usize,
    mats: Vec<RationalMatrix>,
}

impl RegularSequence {
    pub fn new(n: usize) -> Result<Self> {
        Ok(RegularSequence {
            n,
            mats: b_matrices(n)?,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn eval(&self, m: &BigUint) -> Rational {
        let mut row = DyadicRow::unit(self.mats[0].dim());
        for d in regseq_digits(self.n, m) {
            row = row.times(&self.mats[d]);
        }
        row.first()
    }

    pub fn eval_u64(&self, m: u64) -> Rational {
        self.eval(&BigUint::from(m))
    }

    /// Exact `(1/count) Σ_{j<count} η_n(j)`.
    pub fn cesaro(&self, count: u64) -> Result<Rational> {
        if count == 0 {
            return Err(Error::InvalidArgument("mean over zero terms".into()));
        }
        let sum: Rational = (0..count).map(|j| self.eval_u64(j)).sum();
        Ok(sum / Rational::from_integer(count.into()))
    }
}

pub fn regseq_eval(n: usize, m: u64) -> Result<Rational> {
    Ok(RegularSequence::new(n)?.eval_u64(m))
}

pub fn regseq_cesaro(n: usize, count: u64) -> Result<Rational> {
    RegularSequence::new(n)?.cesaro(count)
}

/// Tally of the block recurrence
/// `η_n(2^{n-1}m + a) = (t_a/2)(η_n(2^{n-1}m) + η_n(2^{n-1}m + a))`
/// over `m < m_limit` and every residue `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRecurrenceReport {
    pub checked: u64,
    pub held: u64,
}

pub fn regseq_block_recurrence(n: usize, m_limit: u64) -> Result<BlockRecurrenceReport> {
    let seq = RegularSequence::new(n)?;
    let block = 1u64 << (n - 1);
    let mut report = BlockRecurrenceReport {
        checked: 0,
        held: 0,
    };
    for m in 0..m_limit {
        let head = seq.eval_u64(block * m);
        for a in 0..block {
            let here = seq.eval_u64(block * m + a);
            let rhs = (&head + &here) * int(i64::from(t(a))) / int(2);
            report.checked += 1;
            if rhs == here {
                report.held += 1;
            }
        }
    }
    Ok(report)
}

/// Component-wise agreement of [`eta_vector`] with the scalar evaluator.
pub fn eta_vector_matches(correlator: &Correlator, v: &EtaVector) -> Result<bool> {
    for (offset, value) in v.components.iter().enumerate() {
        let lags: Vec<i64> = v.lags_at(offset).iter().map(|&l| l as i64).collect();
        if correlator.eta(&lags)? != *value {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn m(rows: &[&[i64]], exp: u32) -> RationalMatrix {
        RationalMatrix::from_rows(rows, exp)
    }

    #[test]
    fn elementary_identities() {
        let (e0, e1, j) = elementary_matrices();
        let id = RationalMatrix::identity(2);
        assert_eq!(e0.mul(&e0), id);
        assert_eq!(j.mul(&j), id);
        assert_eq!(e1.mul(&e1), e1);
        assert_eq!(e0.conjugate(), e0.neg());
        assert_eq!(e1.conjugate().conjugate(), e1);
        assert_eq!(j.mul(&e1).mul(&j), e1.conjugate());
        assert_eq!(e0.add(&e1.conjugate()), m(&[&[2, 0], &[-1, -1]], 0));
    }

    #[test]
    fn pair_b_matrices() {
        let [m0, m1] = pair_recursion_matrices();
        assert_eq!(b_matrix_kronecker(&[0], 2).unwrap(), m0);
        assert_eq!(b_matrix_kronecker(&[1], 2).unwrap(), m1);
        let sum = b_sum(2).unwrap();
        assert_eq!(sum, m(&[&[1, -1], &[-1, 1]], 1));
        assert_eq!(sum.mul(&sum), sum);
    }

    #[test]
    fn normalization_is_canonical() {
        let a = m(&[&[2, 0], &[4, -2]], 1);
        let b = m(&[&[1, 0], &[2, -1]], 0);
        assert_eq!(a, b);
        assert_eq!(a.denominator_exp(), 0);
        assert_eq!(RationalMatrix::zeros(3).halve(4).denominator_exp(), 0);
    }

    #[test]
    fn digits() {
        let d = |n, v: u64| regseq_digits(n, &BigUint::from(v));
        assert_eq!(d(4, 0), vec![0]);
        assert_eq!(d(4, 7), vec![7]);
        assert_eq!(d(4, 8), vec![0, 1]);
        assert_eq!(d(4, 8 * 8 + 3), vec![3, 0, 1]);
        assert_eq!(d(2, 6), vec![0, 1, 1]);
        assert_eq!(d(3, 6), vec![2, 1]);
    }

    #[test]
    fn regular_sequence_first_terms() {
        assert_eq!(regseq_eval(4, 0).unwrap(), int(1));
        assert_eq!(regseq_eval(2, 0).unwrap(), int(1));
        assert_eq!(regseq_eval(2, 1).unwrap(), ratio(-1, 2));
        assert_eq!(regseq_cesaro(2, 1).unwrap(), int(1));
    }

    #[test]
    fn csv_rendering() {
        let csv = b_matrix_kronecker(&[0], 2).unwrap().to_csv();
        assert_eq!(csv, "1/1,0/1\n-1/2,-1/2\n");
    }

    #[test]
    fn eta_vector_examples() {
        let v = eta_vector(&[0, 0, 0]).unwrap();
        let third = ratio(-1, 3);
        let one = int(1);
        assert_eq!(
            v.components,
            vec![
                one.clone(),
                third.clone(),
                third.clone(),
                one.clone(),
                third.clone(),
                one.clone(),
                one.clone(),
                third.clone()
            ]
        );
        let v = eta_vector(&[1]).unwrap();
        assert_eq!(v.components, vec![third.clone(), third]);
        let v = eta_vector(&[1, 2, 3]).unwrap();
        assert_eq!(v.components[0], ratio(1, 3));
        assert!(eta_vector_matches(&Correlator::new(), &v).unwrap());
    }

    #[test]
    fn rejects_bad_bits() {
        assert!(b_matrix_kronecker(&[0, 1], 2).is_err());
        assert!(b_matrix_recursion(&[2], 2).is_err());
        assert!(b_matrices(1).is_err());
    }
}
