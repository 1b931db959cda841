//! Sparse chains and graded maps.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coeff::CoefficientSpec;
use crate::error::{Error, Result};

/// A generator of `C_dim`, addressed by its position in the complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId {
    pub dim: usize,
    pub index: usize,
}

impl GeneratorId {
    pub fn new(dim: usize, index: usize) -> Self {
        GeneratorId { dim, index }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}[{}]", self.dim, self.index)
    }
}

/// A homogeneous sparse linear combination of generators.
///
/// Terms are kept sorted by generator index and never hold a zero
/// coefficient. Ring normalization is the caller's job: every method that
/// combines coefficients takes the [`CoefficientSpec`] explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    dim: usize,
    terms: Vec<(usize, BigInt)>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain { dim, terms: Vec::new() }
    }

    pub fn generator(id: GeneratorId) -> Self {
        Chain {
            dim: id.dim,
            terms: vec![(id.index, BigInt::one())],
        }
    }

    /// Sums the given `(index, coefficient)` pairs into a chain.
    pub fn from_terms<I>(dim: usize, terms: I, ring: &CoefficientSpec) -> Self
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut raw: Vec<(usize, BigInt)> = terms.into_iter().collect();
        raw.sort_by_key(|t| t.0);
        let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(raw.len());
        for (i, c) in raw {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += c,
                _ => out.push((i, c)),
            }
        }
        let terms = out
            .into_iter()
            .map(|(i, c)| (i, ring.normalize(c)))
            .filter(|t| !t.1.is_zero())
            .collect();
        Chain { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(index, coefficient)` pairs in ascending index order.
    pub fn terms(&self) -> &[(usize, BigInt)] {
        &self.terms
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (GeneratorId, &BigInt)> + '_ {
        let dim = self.dim;
        self.terms.iter().map(move |(index, c)| (GeneratorId { dim, index: *index }, c))
    }

    /// `<b, a>`: the coefficient of generator `a` in this chain, zero when
    /// absent or of another dimension.
    pub fn coefficient(&self, a: GeneratorId) -> BigInt {
        if a.dim != self.dim {
            return BigInt::zero();
        }
        self.coeff_at(a.index).cloned().unwrap_or_default()
    }

    pub(crate) fn coeff_at(&self, index: usize) -> Option<&BigInt> {
        self.terms
            .binary_search_by_key(&index, |t| t.0)
            .ok()
            .map(|k| &self.terms[k].1)
    }

    /// Returns `self + c * other`.
    pub fn add_scaled(&self, c: &BigInt, other: &Chain, ring: &CoefficientSpec) -> Result<Chain> {
        let mut out = self.clone();
        out.axpy(c, other, ring)?;
        Ok(out)
    }

    /// In place `self += c * other`. Zero chains are dimension-agnostic.
    pub fn axpy(&mut self, c: &BigInt, other: &Chain, ring: &CoefficientSpec) -> Result<()> {
        if other.is_zero() || c.is_zero() {
            return Ok(());
        }
        if self.is_zero() {
            self.dim = other.dim;
        } else if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let one = c.is_one();
        let scaled = |v: &BigInt| if one { v.clone() } else { ring.normalize(c * v) };
        let mine = std::mem::take(&mut self.terms);
        let mut out = Vec::with_capacity(mine.len() + other.terms.len());
        let mut a = mine.into_iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) if x.0 < y.0 => out.push(a.next().unwrap()),
                (Some(x), Some(y)) if x.0 > y.0 => {
                    let v = scaled(&y.1);
                    if !v.is_zero() {
                        out.push((y.0, v));
                    }
                    b.next();
                }
                (Some(_), Some(_)) => {
                    let (i, mut v) = a.next().unwrap();
                    let y = b.next().unwrap();
                    if one {
                        v += &y.1;
                    } else {
                        v += c * &y.1;
                    }
                    let v = ring.normalize(v);
                    if !v.is_zero() {
                        out.push((i, v));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(y)) => {
                    let v = scaled(&y.1);
                    if !v.is_zero() {
                        out.push((y.0, v));
                    }
                    b.next();
                }
                (None, None) => break,
            }
        }
        self.terms = out;
        Ok(())
    }

    /// In place multiplication by a scalar.
    pub fn scale(&mut self, s: &BigInt, ring: &CoefficientSpec) {
        if s.is_one() {
            return;
        }
        let terms = std::mem::take(&mut self.terms);
        self.terms = terms
            .into_iter()
            .map(|(i, v)| (i, ring.normalize(v * s)))
            .filter(|t| !t.1.is_zero())
            .collect();
    }

    pub fn scaled(&self, s: &BigInt, ring: &CoefficientSpec) -> Chain {
        let mut out = self.clone();
        out.scale(s, ring);
        out
    }

    /// Re-normalizes every coefficient in `ring` (e.g. reduction mod p).
    pub fn reduce(&self, ring: &CoefficientSpec) -> Chain {
        Chain::from_terms(self.dim, self.terms.iter().cloned(), ring)
    }

    /// Relabels generator indices through `map`; panics on an unmapped index.
    pub(crate) fn reindex(&self, map: &[usize]) -> Chain {
        let mut terms: Vec<(usize, BigInt)> = self.terms.iter().map(|(i, v)| (map[*i], v.clone())).collect();
        terms.sort_by_key(|t| t.0);
        Chain { dim: self.dim, terms }
    }
}

/// A homogeneous map of some degree between graded generator sets.
///
/// Only non-zero images are stored; a missing entry is the zero chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    degree: i32,
    images: BTreeMap<GeneratorId, Chain>,
}

impl GradedMap {
    pub fn new(degree: i32) -> Self {
        GradedMap {
            degree,
            images: BTreeMap::new(),
        }
    }

    /// The identity on the given generators (degree 0).
    pub fn identity<I: IntoIterator<Item = GeneratorId>>(generators: I) -> Self {
        let mut m = GradedMap::new(0);
        for id in generators {
            m.images.insert(id, Chain::generator(id));
        }
        m
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn target_dim(&self, dim: usize) -> Option<usize> {
        let t = dim as i64 + self.degree as i64;
        (t >= 0).then_some(t as usize)
    }

    /// Stores the image of `id`. Zero chains are dropped.
    pub fn set(&mut self, id: GeneratorId, image: Chain) -> Result<()> {
        if image.is_zero() {
            self.images.remove(&id);
            return Ok(());
        }
        match self.target_dim(id.dim) {
            Some(t) if t == image.dim() => {
                self.images.insert(id, image);
                Ok(())
            }
            _ => Err(Error::DimensionMismatch {
                expected: self.target_dim(id.dim).unwrap_or(0),
                found: image.dim(),
            }),
        }
    }

    pub fn get(&self, id: GeneratorId) -> Option<&Chain> {
        self.images.get(&id)
    }

    /// The image of `id`, the zero chain when absent.
    pub fn image(&self, id: GeneratorId) -> Chain {
        match self.images.get(&id) {
            Some(c) => c.clone(),
            None => Chain::zero(self.target_dim(id.dim).unwrap_or(0)),
        }
    }

    pub fn contains(&self, id: GeneratorId) -> bool {
        self.images.contains_key(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (GeneratorId, &Chain)> + '_ {
        self.images.iter().map(|(&k, v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Linear extension to chains.
    pub fn apply(&self, b: &Chain, ring: &CoefficientSpec) -> Chain {
        let dim = self.target_dim(b.dim()).unwrap_or(0);
        let mut out = Chain::zero(dim);
        for (id, c) in b.iter() {
            if let Some(img) = self.images.get(&id) {
                let _ = out.axpy(c, img, ring);
            }
        }
        out
    }

    /// `self ∘ inner`, evaluated on every generator `inner` has an image for.
    pub fn compose(&self, inner: &GradedMap, ring: &CoefficientSpec) -> GradedMap {
        let mut out = GradedMap::new(self.degree + inner.degree);
        for (id, img) in inner.iter() {
            let v = self.apply(img, ring);
            if !v.is_zero() {
                out.images.insert(id, v);
            }
        }
        out
    }

    pub fn scaled(&self, s: &BigInt, ring: &CoefficientSpec) -> GradedMap {
        let mut out = GradedMap::new(self.degree);
        for (id, img) in self.iter() {
            let v = img.scaled(s, ring);
            if !v.is_zero() {
                out.images.insert(id, v);
            }
        }
        out
    }

    /// Pointwise sum `self + c * other`.
    pub fn add_scaled(&self, c: &BigInt, other: &GradedMap, ring: &CoefficientSpec) -> Result<GradedMap> {
        if self.degree != other.degree {
            return Err(Error::ComplexMismatch(format!(
                "cannot add maps of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (id, img) in other.iter() {
            let mut cur = out.images.remove(&id).unwrap_or_else(|| Chain::zero(img.dim()));
            cur.axpy(c, img, ring)?;
            if !cur.is_zero() {
                out.images.insert(id, cur);
            }
        }
        Ok(out)
    }

    /// Re-normalizes every image in `ring`.
    pub fn reduce(&self, ring: &CoefficientSpec) -> GradedMap {
        let mut out = GradedMap::new(self.degree);
        for (id, img) in self.iter() {
            let v = img.reduce(ring);
            if !v.is_zero() {
                out.images.insert(id, v);
            }
        }
        out
    }

    pub(crate) fn insert_unchecked(&mut self, id: GeneratorId, image: Chain) {
        if !image.is_zero() {
            self.images.insert(id, image);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Z: CoefficientSpec = CoefficientSpec::Integers;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn chain(dim: usize, terms: &[(usize, i64)], ring: &CoefficientSpec) -> Chain {
        Chain::from_terms(dim, terms.iter().map(|&(i, c)| (i, b(c))), ring)
    }

    #[test]
    fn coefficient_lookup() {
        // b = 2·e0 − e1
        let c = chain(1, &[(0, 2), (1, -1)], &Z);
        assert_eq!(c.coefficient(GeneratorId::new(1, 1)), b(-1));
        assert_eq!(c.coefficient(GeneratorId::new(1, 5)), b(0));
        assert_eq!(c.coefficient(GeneratorId::new(0, 1)), b(0));
        assert_eq!(Chain::zero(2).coefficient(GeneratorId::new(2, 0)), b(0));
    }

    #[test]
    fn add_scaled_cases() {
        let v1 = Chain::generator(GeneratorId::new(0, 1));
        let v2 = Chain::generator(GeneratorId::new(0, 2));
        assert!(v1.add_scaled(&b(-1), &v1, &Z).unwrap().is_zero());
        assert_eq!(v1.add_scaled(&b(2), &v2, &Z).unwrap(), chain(0, &[(1, 1), (2, 2)], &Z));
        let f3 = CoefficientSpec::PrimeField(3);
        assert!(v1.add_scaled(&b(2), &v1, &f3).unwrap().is_zero());
        let e = Chain::generator(GeneratorId::new(1, 0));
        assert!(matches!(
            v1.add_scaled(&b(1), &e, &Z),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn field_coefficients_are_canonical() {
        let f5 = CoefficientSpec::PrimeField(5);
        let c = chain(0, &[(0, -1), (1, 7), (2, 10)], &f5);
        assert_eq!(c, chain(0, &[(0, 4), (1, 2)], &f5));
        assert!(c.terms().iter().map(|t| &t.1).all(|v| *v >= b(0) && *v < b(5)));
    }

    #[test]
    fn graded_map_rejects_wrong_dimension() {
        let mut d = GradedMap::new(-1);
        assert!(d.set(GeneratorId::new(1, 0), Chain::generator(GeneratorId::new(1, 0))).is_err());
        assert!(d.set(GeneratorId::new(1, 0), Chain::generator(GeneratorId::new(0, 0))).is_ok());
        assert_eq!(d.len(), 1);
        d.set(GeneratorId::new(1, 0), Chain::zero(0)).unwrap();
        assert!(d.is_empty());
    }

    fn arb_chain(dim: usize) -> impl Strategy<Value = Chain> {
        proptest::collection::vec((0usize..6, -4i64..5), 0..6)
            .prop_map(move |t| chain(dim, &t, &Z))
    }

    fn arb_map() -> impl Strategy<Value = GradedMap> {
        proptest::collection::vec(arb_chain(0), 6).prop_map(|imgs| {
            let mut m = GradedMap::new(-1);
            for (i, c) in imgs.into_iter().enumerate() {
                m.insert_unchecked(GeneratorId::new(1, i), c);
            }
            m
        })
    }

    proptest! {
        #[test]
        fn apply_is_linear(m in arb_map(), a in arb_chain(1), bb in arb_chain(1), c in -5i64..6) {
            let lhs = m.apply(&a.add_scaled(&b(c), &bb, &Z).unwrap(), &Z);
            let rhs = m.apply(&a, &Z).add_scaled(&b(c), &m.apply(&bb, &Z), &Z).unwrap();
            prop_assert_eq!(lhs.terms(), rhs.terms());
        }

        #[test]
        fn no_zero_coefficients(a in arb_chain(1), bb in arb_chain(1), c in -5i64..6) {
            let s = a.add_scaled(&b(c), &bb, &Z).unwrap();
            prop_assert!(s.terms().iter().map(|t| &t.1).all(|v| !v.is_zero()));
        }
    }
}
