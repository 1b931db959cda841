//! Lambda-AT-models: `((C, d), H, f, g, φ, λ)` with `fg = λ·id` on `H` and
//! `λ·id − gf = φd + dφ` on `C`, where `H ⊂ C` spans a complex with null
//! differential.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chain::{Chain, GeneratorId, GradedMap};
use crate::coeff::{prime_factors, CoefficientSpec};
use crate::complex::{reduce_mod_p, require_valid, ChainComplex};
use crate::engine::{eliminate, PivotRule};
use crate::error::{Error, Result};

/// A lambda-AT-model of a chain complex.
///
/// `f` maps every generator into the span of `H` (expressed in the
/// generators of `complex`), `g` is defined exactly on `H`, and `φ` raises
/// dimension by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaATModel {
    pub complex: Arc<ChainComplex>,
    /// `h[q]`: indices of the surviving generators of `C_q`, ascending.
    pub h: Vec<Vec<usize>>,
    pub f: GradedMap,
    pub g: GradedMap,
    pub phi: GradedMap,
    pub lambda: BigInt,
    /// Number of pivots the construction performed.
    pub pivot_count: usize,
}

/// One of the identities a (lambda-)AT-model or contraction must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `f d(a) = d' f(a)`; for an AT-model `d' = 0`.
    ChainMapF,
    /// `d g(h) = g d'(h)`; for an AT-model `d g(h) = 0`.
    ChainMapG,
    /// `f g(h) = λ h`.
    Section,
    /// `λ a − g f(a) = φ d(a) + d φ(a)`.
    Homotopy,
    /// `f φ(a) = 0`.
    Annihilation,
    /// `f(a)` lies outside the span of `H`, `g` is defined off `H`, or
    /// `λ = 0`.
    Shape,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub identity: Identity,
    pub generator: GeneratorId,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} fails at {}", self.identity, self.generator)
    }
}

impl LambdaATModel {
    pub fn ring(&self) -> &CoefficientSpec {
        self.complex.coeffs()
    }

    /// `|H_q|` for every `q`.
    pub fn h_sizes(&self) -> Vec<usize> {
        self.h.iter().map(Vec::len).collect()
    }

    pub fn h_generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        self.h
            .iter()
            .enumerate()
            .flat_map(|(q, hs)| hs.iter().map(move |&i| GeneratorId::new(q, i)))
    }

    pub fn in_h(&self, id: GeneratorId) -> bool {
        self.h.get(id.dim).is_some_and(|hs| hs.binary_search(&id.index).is_ok())
    }

    /// `g(h)`; panics when `h ∉ H`, where `g` is undefined.
    pub fn g_of(&self, h: GeneratorId) -> Chain {
        assert!(self.in_h(h), "g is only defined on H, not on {h}");
        self.g.image(h)
    }
}

/// Builds a lambda-AT-model by incremental elimination over the ring of
/// `cc`. Over `Z` the pivot is always an entry of least absolute value and
/// `λ` is kept positive; over `Z/p` the result has `λ = 1`.
pub fn compute_lambda_at_model(cc: &Arc<ChainComplex>) -> Result<LambdaATModel> {
    require_valid(cc)?;
    let run = eliminate(cc, PivotRule::Minimal);
    let mut f = GradedMap::new(0);
    let mut phi = GradedMap::new(1);
    let mut g = GradedMap::new(0);
    for (q, level) in run.f.into_iter().enumerate() {
        for (i, c) in level.into_iter().enumerate() {
            f.insert_unchecked(GeneratorId::new(q, i), c);
        }
    }
    for (q, level) in run.phi.into_iter().enumerate() {
        for (i, c) in level.into_iter().enumerate() {
            phi.insert_unchecked(GeneratorId::new(q, i), c);
        }
    }
    for (q, (hs, gs)) in run.survivors.iter().zip(run.g).enumerate() {
        for (&i, c) in hs.iter().zip(gs) {
            g.insert_unchecked(GeneratorId::new(q, i), c);
        }
    }
    Ok(LambdaATModel {
        complex: Arc::clone(cc),
        h: run.survivors,
        f,
        g,
        phi,
        lambda: run.lambda,
        pivot_count: run.pivots.len(),
    })
}

/// Replaces a model with negative `λ` by `(H, −f, g, −φ, −λ)`.
pub fn normalize_sign(m: LambdaATModel) -> LambdaATModel {
    if !m.lambda.is_negative() {
        return m;
    }
    let ring = *m.ring();
    let minus = -BigInt::one();
    LambdaATModel {
        f: m.f.scaled(&minus, &ring),
        phi: m.phi.scaled(&minus, &ring),
        lambda: -m.lambda,
        ..m
    }
}

/// Checks the five model identities on every generator. An empty result
/// means the model is valid.
pub fn verify_model(m: &LambdaATModel) -> Vec<Violation> {
    let ring = *m.ring();
    let cc = &m.complex;
    let lambda = ring.normalize(m.lambda.clone());
    let mut out = Vec::new();
    let mut push = |identity, generator| out.push(Violation { identity, generator });

    if lambda.is_zero() {
        push(Identity::Shape, GeneratorId::new(0, 0));
    }
    for (id, _) in m.g.iter() {
        if !m.in_h(id) {
            push(Identity::Shape, id);
        }
    }
    for a in cc.all_generators() {
        let fa = m.f.image(a);
        if fa.iter().any(|(t, _)| !m.in_h(t)) {
            push(Identity::Shape, a);
        }
        let da = cc.boundary(a);
        if !m.f.apply(&da, &ring).is_zero() {
            push(Identity::ChainMapF, a);
        }
        let phi_a = m.phi.image(a);
        let mut lhs = Chain::generator(a).scaled(&lambda, &ring);
        let _ = lhs.axpy(&ring.neg(&BigInt::one()), &m.g.apply(&fa, &ring), &ring);
        let mut rhs = m.phi.apply(&da, &ring);
        let _ = rhs.axpy(&BigInt::one(), &cc.d(&phi_a), &ring);
        if lhs.terms() != rhs.terms() {
            push(Identity::Homotopy, a);
        }
        if !m.f.apply(&phi_a, &ring).is_zero() {
            push(Identity::Annihilation, a);
        }
    }
    for h in m.h_generators() {
        let gh = m.g.image(h);
        if !cc.d(&gh).is_zero() {
            push(Identity::ChainMapG, h);
        }
        let fgh = m.f.apply(&gh, &ring);
        if fgh.terms() != Chain::generator(h).scaled(&lambda, &ring).terms() {
            push(Identity::Section, h);
        }
    }
    out
}

/// `{g(h) : h ∈ H}`, ordered by `(dim, index)` of `h`.
pub fn representative_cycles(m: &LambdaATModel) -> Vec<Chain> {
    m.h_generators().map(|h| m.g.image(h)).collect()
}

/// Distinct primes dividing `λ`, ascending.
pub fn torsion_prime_candidates(m: &LambdaATModel) -> Vec<BigInt> {
    prime_factors(&m.lambda)
}

/// Derives the AT-model over `Z/p`: `(d mod p, H, λ⁻¹f, g, λ⁻¹φ)`.
pub fn to_at_model_mod_p(m: &LambdaATModel, p: u64) -> Result<LambdaATModel> {
    let field = CoefficientSpec::prime_field(p)?;
    if *m.ring() != CoefficientSpec::Integers {
        return Err(Error::CoefficientMismatch {
            expected: CoefficientSpec::Integers.to_string(),
            found: m.ring().to_string(),
        });
    }
    let inv = field
        .inverse(&m.lambda)
        .ok_or_else(|| Error::LambdaDivisibleByPrime {
            p,
            lambda: m.lambda.to_string(),
        })?;
    let complex = Arc::new(reduce_mod_p(&m.complex, p)?);
    Ok(LambdaATModel {
        complex,
        h: m.h.clone(),
        f: m.f.reduce(&field).scaled(&inv, &field),
        g: m.g.reduce(&field),
        phi: m.phi.reduce(&field).scaled(&inv, &field),
        lambda: BigInt::one(),
        pivot_count: m.pivot_count,
    })
}

type RationalChain = BTreeMap<GeneratorId, BigRational>;

/// An AT-model over `Q` with exact rational coefficients.
#[derive(Debug, Clone)]
pub struct RationalATModel {
    pub complex: Arc<ChainComplex>,
    pub h: Vec<Vec<usize>>,
    pub f: BTreeMap<GeneratorId, RationalChain>,
    pub g: BTreeMap<GeneratorId, RationalChain>,
    pub phi: BTreeMap<GeneratorId, RationalChain>,
}

fn rational_map(m: &GradedMap, denom: &BigInt) -> BTreeMap<GeneratorId, RationalChain> {
    m.iter()
        .map(|(id, c)| {
            let img = c
                .iter()
                .map(|(t, v)| (t, BigRational::new(v.clone(), denom.clone())))
                .collect();
            (id, img)
        })
        .collect()
}

fn rat_axpy(acc: &mut RationalChain, c: &BigRational, x: &RationalChain) {
    for (k, v) in x {
        let e = acc.entry(*k).or_insert_with(BigRational::zero);
        *e += c * v;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

fn rat_apply(m: &BTreeMap<GeneratorId, RationalChain>, x: &RationalChain) -> RationalChain {
    let mut out = RationalChain::new();
    for (id, c) in x {
        if let Some(img) = m.get(id) {
            rat_axpy(&mut out, c, img);
        }
    }
    out
}

fn rat_boundary(cc: &ChainComplex, x: &RationalChain) -> RationalChain {
    let mut out = RationalChain::new();
    for (id, c) in x {
        if let Some(bd) = cc.boundary_ref(*id) {
            let img: RationalChain = bd.iter().map(|(t, v)| (t, BigRational::from(v.clone()))).collect();
            rat_axpy(&mut out, c, &img);
        }
    }
    out
}

fn rat_generator(id: GeneratorId) -> RationalChain {
    let mut c = RationalChain::new();
    c.insert(id, BigRational::one());
    c
}

impl RationalATModel {
    /// Checks the `λ = 1` identities over `Q`.
    pub fn verify(&self) -> Vec<Violation> {
        let cc = &self.complex;
        let minus = -BigRational::one();
        let one = BigRational::one();
        let in_h = |id: GeneratorId| self.h.get(id.dim).is_some_and(|hs| hs.binary_search(&id.index).is_ok());
        let mut out = Vec::new();
        for a in cc.all_generators() {
            let ga = rat_generator(a);
            let da = rat_boundary(cc, &ga);
            let fa = self.f.get(&a).cloned().unwrap_or_default();
            if !rat_apply(&self.f, &da).is_empty() {
                out.push(Violation { identity: Identity::ChainMapF, generator: a });
            }
            let mut lhs = ga.clone();
            rat_axpy(&mut lhs, &minus, &rat_apply(&self.g, &fa));
            let phi_a = self.phi.get(&a).cloned().unwrap_or_default();
            let mut rhs = rat_apply(&self.phi, &da);
            rat_axpy(&mut rhs, &one, &rat_boundary(cc, &phi_a));
            if lhs != rhs {
                out.push(Violation { identity: Identity::Homotopy, generator: a });
            }
            if !rat_apply(&self.f, &phi_a).is_empty() {
                out.push(Violation { identity: Identity::Annihilation, generator: a });
            }
        }
        for (q, hs) in self.h.iter().enumerate() {
            for &i in hs {
                let h = GeneratorId::new(q, i);
                let gh = self.g.get(&h).cloned().unwrap_or_default();
                if !rat_boundary(cc, &gh).is_empty() {
                    out.push(Violation { identity: Identity::ChainMapG, generator: h });
                }
                if rat_apply(&self.f, &gh) != rat_generator(h) {
                    out.push(Violation { identity: Identity::Section, generator: h });
                }
            }
        }
        for id in self.g.keys() {
            if !in_h(*id) {
                out.push(Violation { identity: Identity::Shape, generator: *id });
            }
        }
        out
    }
}

/// `(f/λ, g, φ/λ)` over the rationals.
pub fn to_rational_at_model(m: &LambdaATModel) -> RationalATModel {
    let one = BigInt::one();
    RationalATModel {
        complex: Arc::clone(&m.complex),
        h: m.h.clone(),
        f: rational_map(&m.f, &m.lambda),
        g: rational_map(&m.g, &one),
        phi: rational_map(&m.phi, &m.lambda),
    }
}

/// Converts a small positive `λ` prime to `u64`, for the mod-p runs.
pub(crate) fn prime_to_u64(p: &BigInt) -> Option<u64> {
    p.to_u64()
}
