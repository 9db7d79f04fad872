//! Bit vectors, linear subspaces, and affine cosets over GF(2).
//!
//! Negation patterns, depth-flip sets, and their witness sets all live in
//! GF(2)^n. The central fact exercised by the solvers is that every nonempty
//! witness set is a coset `w + V` of a stabilizer subspace `V`, so it has
//! exactly `2^dim(V)` elements. [`AffineSet::from_points`] verifies that
//! structure instead of assuming it.

use std::collections::HashSet;
use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("vectors have mixed lengths ({0} and {1})")]
    MixedLengths(usize, usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("points do not form an affine coset: {0}")]
    NotACoset(String),
    #[error("invalid vector literal {0:?}: expected a string over {{0,1}}")]
    BadLiteral(String),
}

/// A fixed-length bit vector over GF(2), packed into 64-bit limbs.
///
/// Coordinate 0 corresponds to variable `x1`; the textual form is a binary
/// string with coordinate 0 leftmost, so `"011"` sets `x2` and `x3`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Vector {
    len: usize,
    limbs: Vec<u64>,
}

impl GF2Vector {
    pub fn zeros(len: usize) -> Self {
        GF2Vector {
            len,
            limbs: vec![0; len.div_ceil(64)],
        }
    }

    /// Builds a vector from the low `len` bits of `index` (bit i = coordinate i).
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len >= 64 - index.leading_zeros() as usize, "index out of range");
        let mut v = Self::zeros(len);
        if !v.limbs.is_empty() {
            v.limbs[0] = index;
        }
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            v.set(i, *b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "coordinate {i} out of range for length {}", self.len);
        (self.limbs[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "coordinate {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.limbs[i / 64] |= mask;
        } else {
            self.limbs[i / 64] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the first nonzero coordinate, if any.
    pub fn leading_one(&self) -> Option<usize> {
        for (i, &w) in self.limbs.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn xor_assign(&mut self, other: &GF2Vector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl BitXor for &GF2Vector {
    type Output = GF2Vector;

    fn bitxor(self, rhs: &GF2Vector) -> GF2Vector {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter_bits() {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Vector({self})")
    }
}

impl FromStr for GF2Vector {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Gf2Error> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Gf2Error::BadLiteral(s.to_string())),
            }
        }
        Ok(GF2Vector::from_bits(bits))
    }
}

/// A linear subspace of GF(2)^n, stored as a reduced row echelon basis.
///
/// Pivot columns strictly increase and every pivot column is zero in all
/// other rows, so two bases are structurally equal exactly when they span the
/// same subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GF2Basis {
    ambient: usize,
    rows: Vec<GF2Vector>,
}

impl GF2Basis {
    pub fn empty(ambient: usize) -> Self {
        GF2Basis { ambient, rows: Vec::new() }
    }

    /// Gaussian elimination over GF(2); the result is canonical for the span.
    pub fn echelon(ambient: usize, vectors: &[GF2Vector]) -> Result<Self, Gf2Error> {
        let mut basis = Self::empty(ambient);
        for v in vectors {
            if v.len() != ambient {
                return Err(Gf2Error::MixedLengths(ambient, v.len()));
            }
            basis.insert(v);
        }
        Ok(basis)
    }

    /// Adds a vector to the span; returns true when the dimension grew.
    pub fn insert(&mut self, v: &GF2Vector) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient dimension");
        let residual = self.reduce(v);
        let Some(pivot) = residual.leading_one() else {
            return false;
        };
        // Back-substitute so existing rows stay clear of the new pivot column.
        for row in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&residual);
            }
        }
        let at = self
            .rows
            .iter()
            .position(|r| r.leading_one().unwrap() > pivot)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, residual);
        true
    }

    /// Residual of `v` after eliminating with every basis row; zero iff `v`
    /// is in the span.
    pub fn reduce(&self, v: &GF2Vector) -> GF2Vector {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient dimension");
        let mut acc = v.clone();
        for row in &self.rows {
            if acc.get(row.leading_one().unwrap()) {
                acc.xor_assign(row);
            }
        }
        acc
    }

    pub fn member(&self, v: &GF2Vector) -> Result<bool, Gf2Error> {
        if v.len() != self.ambient {
            return Err(Gf2Error::LengthMismatch { expected: self.ambient, got: v.len() });
        }
        Ok(self.reduce(v).is_zero())
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[GF2Vector] {
        &self.rows
    }
}

/// A subset of GF(2)^n that is either empty or a full affine coset
/// `representative + span(basis)`.
#[derive(Clone, Debug)]
pub enum AffineSet {
    Empty,
    Coset {
        representative: GF2Vector,
        basis: GF2Basis,
    },
}

impl AffineSet {
    /// Builds the affine set generated by `points` and verifies that the
    /// input is *exactly* that coset.
    ///
    /// The coset structure of witness sets is the property under test
    /// throughout this crate, so a caller handing us a non-coset is treated
    /// as a hard failure ([`Gf2Error::NotACoset`]), not silently completed.
    pub fn from_points(points: &[GF2Vector]) -> Result<Self, Gf2Error> {
        let Some(first) = points.first() else {
            return Ok(AffineSet::Empty);
        };
        let n = first.len();
        let mut distinct: HashSet<&GF2Vector> = HashSet::new();
        for p in points {
            if p.len() != n {
                return Err(Gf2Error::MixedLengths(n, p.len()));
            }
            distinct.insert(p);
        }
        let diffs: Vec<GF2Vector> = distinct.iter().map(|p| *p ^ first).collect();
        let basis = GF2Basis::echelon(n, &diffs)?;
        if basis.dim() >= 64 || (1u64 << basis.dim()) as usize != distinct.len() {
            return Err(Gf2Error::NotACoset(format!(
                "{} distinct points span a coset of dimension {}",
                distinct.len(),
                basis.dim()
            )));
        }
        for p in &distinct {
            if !basis.reduce(&(*p ^ first)).is_zero() {
                return Err(Gf2Error::NotACoset(format!("point {p} escapes the generated coset")));
            }
        }
        Ok(AffineSet::Coset { representative: first.clone(), basis })
    }

    /// Number of elements: 0 when empty, otherwise `2^dim`.
    pub fn cardinality(&self) -> u64 {
        match self {
            AffineSet::Empty => 0,
            AffineSet::Coset { basis, .. } => {
                assert!(basis.dim() < 64, "coset too large to count in u64");
                1u64 << basis.dim()
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, AffineSet::Empty)
    }

    pub fn contains(&self, v: &GF2Vector) -> Result<bool, Gf2Error> {
        match self {
            AffineSet::Empty => Ok(false),
            AffineSet::Coset { representative, basis } => {
                if v.len() != basis.ambient_dim() {
                    return Err(Gf2Error::LengthMismatch {
                        expected: basis.ambient_dim(),
                        got: v.len(),
                    });
                }
                Ok(basis.reduce(&(v ^ representative)).is_zero())
            }
        }
    }

    pub fn representative(&self) -> Option<&GF2Vector> {
        match self {
            AffineSet::Empty => None,
            AffineSet::Coset { representative, .. } => Some(representative),
        }
    }

    pub fn basis(&self) -> Option<&GF2Basis> {
        match self {
            AffineSet::Empty => None,
            AffineSet::Coset { basis, .. } => Some(basis),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.basis().map(GF2Basis::dim)
    }

    /// Set equality (representatives may differ for the same coset).
    pub fn same_set(&self, other: &AffineSet) -> bool {
        match (self, other) {
            (AffineSet::Empty, AffineSet::Empty) => true,
            (
                AffineSet::Coset { representative: r1, basis: b1 },
                AffineSet::Coset { representative: r2, basis: b2 },
            ) => b1 == b2 && b1.reduce(&(r1 ^ r2)).is_zero(),
            _ => false,
        }
    }

    /// Every element, in no particular order. Intended for desk-scale sets.
    pub fn enumerate(&self) -> Vec<GF2Vector> {
        match self {
            AffineSet::Empty => Vec::new(),
            AffineSet::Coset { representative, basis } => {
                assert!(basis.dim() < 32, "coset too large to enumerate");
                let mut out = Vec::with_capacity(1 << basis.dim());
                for mask in 0u64..(1 << basis.dim()) {
                    let mut v = representative.clone();
                    for (j, row) in basis.rows().iter().enumerate() {
                        if (mask >> j) & 1 == 1 {
                            v.xor_assign(row);
                        }
                    }
                    out.push(v);
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> GF2Vector {
        s.parse().unwrap()
    }

    /// Brute-force span: every XOR combination of the input vectors.
    fn span_by_enumeration(ambient: usize, vectors: &[GF2Vector]) -> HashSet<GF2Vector> {
        let mut out = HashSet::new();
        for mask in 0u64..(1 << vectors.len()) {
            let mut acc = GF2Vector::zeros(ambient);
            for (i, vec) in vectors.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    acc.xor_assign(vec);
                }
            }
            out.insert(acc);
        }
        out
    }

    #[test]
    fn vector_string_round_trip() {
        let x = v("0110");
        assert_eq!(x.to_string(), "0110");
        assert!(!x.get(0) && x.get(1) && x.get(2) && !x.get(3));
        assert!("01x2".parse::<GF2Vector>().is_err());
    }

    #[test]
    fn from_index_bit_layout() {
        // bit 0 of the index is coordinate 0 (= x1).
        let x = GF2Vector::from_index(0b110, 3);
        assert_eq!(x.to_string(), "011");
    }

    #[test]
    fn echelon_empty_input() {
        let b = GF2Basis::echelon(3, &[]).unwrap();
        assert_eq!(b.dim(), 0);
        assert!(b.member(&v("000")).unwrap());
        assert!(!b.member(&v("100")).unwrap());
    }

    #[test]
    fn echelon_dependent_vectors() {
        // 110 = 011 xor 101, so the span has dimension 2.
        let b = GF2Basis::echelon(3, &[v("011"), v("101"), v("110")]).unwrap();
        assert_eq!(b.dim(), 2);
        let brute = span_by_enumeration(3, &[v("011"), v("101"), v("110")]);
        assert_eq!(brute.len(), 4);
        for x in 0u64..8 {
            let candidate = GF2Vector::from_index(x, 3);
            assert_eq!(b.member(&candidate).unwrap(), brute.contains(&candidate));
        }
    }

    #[test]
    fn echelon_duplicate_vectors() {
        let b = GF2Basis::echelon(3, &[v("100"), v("100")]).unwrap();
        assert_eq!(b.dim(), 1);
    }

    #[test]
    fn echelon_rejects_mixed_lengths() {
        assert_eq!(
            GF2Basis::echelon(3, &[v("011"), v("0110")]),
            Err(Gf2Error::MixedLengths(3, 4))
        );
    }

    #[test]
    fn member_matches_brute_span() {
        let gens = [v("011"), v("101")];
        let b = GF2Basis::echelon(3, &gens).unwrap();
        assert!(b.member(&v("110")).unwrap());
        assert!(!b.member(&v("001")).unwrap());
    }

    #[test]
    fn echelon_is_idempotent_on_its_own_rows() {
        let b = GF2Basis::echelon(4, &[v("1101"), v("0111"), v("1010")]).unwrap();
        let again = GF2Basis::echelon(4, b.rows()).unwrap();
        assert_eq!(b, again);
    }

    #[test]
    fn affine_empty_and_singleton() {
        assert!(AffineSet::from_points(&[]).unwrap().is_empty());
        let single = AffineSet::from_points(&[v("010")]).unwrap();
        assert_eq!(single.cardinality(), 1);
        assert_eq!(single.representative().unwrap().to_string(), "010");
        assert_eq!(single.dim(), Some(0));
    }

    #[test]
    fn affine_pair_coset() {
        let set = AffineSet::from_points(&[v("00"), v("11")]).unwrap();
        assert_eq!(set.representative().unwrap().to_string(), "00");
        assert_eq!(set.dim(), Some(1));
        assert_eq!(set.cardinality(), 2);
        assert!(set.contains(&v("11")).unwrap());
        assert!(!set.contains(&v("01")).unwrap());
    }

    #[test]
    fn affine_rejects_non_coset() {
        let err = AffineSet::from_points(&[v("000"), v("001"), v("010")]).unwrap_err();
        assert!(matches!(err, Gf2Error::NotACoset(_)));
    }

    #[test]
    fn affine_accepts_every_true_coset() {
        // r + span(B) must round-trip for any r, B.
        let gens = [v("01100"), v("00011"), v("10000")];
        let rep = v("10101");
        let span = span_by_enumeration(5, &gens);
        let points: Vec<GF2Vector> = span.iter().map(|s| s ^ &rep).collect();
        let set = AffineSet::from_points(&points).unwrap();
        assert_eq!(set.cardinality() as usize, points.len());
        for p in &points {
            assert!(set.contains(p).unwrap());
        }
    }

    #[test]
    fn same_set_ignores_representative_choice() {
        let a = AffineSet::from_points(&[v("00"), v("11")]).unwrap();
        let b = AffineSet::from_points(&[v("11"), v("00")]).unwrap();
        assert!(a.same_set(&b));
    }
}
