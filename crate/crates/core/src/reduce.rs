//! Unit-pivot reduction of a chain complex to a smaller one, and composition
//! of lambda-chain contractions.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::atmodel::{Identity, LambdaATModel, Violation};
use crate::chain::{Chain, GeneratorId, GradedMap};
use crate::coeff::CoefficientSpec;
use crate::complex::{require_valid, verify_complex, ChainComplex};
use crate::engine::{eliminate, PivotRule};
use crate::error::{Error, Result};

/// A lambda-chain contraction `(f, g, φ, λ)` of `source` onto `target`.
///
/// Target generators are always a subset of the source generators;
/// `inclusion[q][i]` is the source index of target generator `(q, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainContraction {
    pub source: Arc<ChainComplex>,
    pub target: Arc<ChainComplex>,
    pub f: GradedMap,
    pub g: GradedMap,
    pub phi: GradedMap,
    pub lambda: BigInt,
    pub inclusion: Vec<Vec<usize>>,
}

impl ChainContraction {
    /// `(id, id, 0, 1)` on `cc`.
    pub fn identity(cc: &Arc<ChainComplex>) -> Self {
        ChainContraction {
            source: Arc::clone(cc),
            target: Arc::clone(cc),
            f: GradedMap::identity(cc.all_generators()),
            g: GradedMap::identity(cc.all_generators()),
            phi: GradedMap::new(1),
            lambda: BigInt::one(),
            inclusion: (0..cc.num_levels()).map(|q| (0..cc.size(q)).collect()).collect(),
        }
    }

    pub fn ring(&self) -> &CoefficientSpec {
        self.source.coeffs()
    }
}

fn same_complex(a: &Arc<ChainComplex>, b: &Arc<ChainComplex>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Eliminates every `±1` entry of `f d` it can, producing a chain
/// contraction (`λ = 1`) onto the surviving generators with
/// `d'(a) = f d(a)`.
pub fn preprocess(cc: &Arc<ChainComplex>) -> Result<ChainContraction> {
    if *cc.coeffs() != CoefficientSpec::Integers {
        return Err(Error::CoefficientMismatch {
            expected: CoefficientSpec::Integers.to_string(),
            found: cc.coeffs().to_string(),
        });
    }
    require_valid(cc)?;
    let ring = *cc.coeffs();
    let run = eliminate(cc, PivotRule::UnitOnly);

    // source index → target index, per dimension
    let positions: Vec<Vec<usize>> = (0..cc.num_levels())
        .map(|q| {
            let mut pos = vec![usize::MAX; cc.size(q)];
            for (t, &s) in run.survivors[q].iter().enumerate() {
                pos[s] = t;
            }
            pos
        })
        .collect();

    let labels: Vec<Vec<String>> = run
        .survivors
        .iter()
        .enumerate()
        .map(|(q, s)| s.iter().map(|&i| cc.label(GeneratorId::new(q, i)).to_string()).collect())
        .collect();
    let mut d_target = GradedMap::new(-1);
    for (q, ds) in run.reduced_d.iter().enumerate() {
        for (t, d) in ds.iter().enumerate() {
            if q > 0 && !d.is_zero() {
                d_target.insert_unchecked(GeneratorId::new(q, t), d.reindex(&positions[q - 1]));
            }
        }
    }
    let mut levels = labels;
    while levels.last().is_some_and(Vec::is_empty) {
        levels.pop();
    }
    let target = ChainComplex::new(ring, levels, d_target)?;
    if !verify_complex(&target) {
        return Err(Error::InvalidComplex("reduced complex violates d∘d = 0".into()));
    }

    let mut f = GradedMap::new(0);
    let mut phi = GradedMap::new(1);
    let mut g = GradedMap::new(0);
    for (q, level) in run.f.iter().enumerate() {
        for (i, c) in level.iter().enumerate() {
            if !c.is_zero() {
                f.insert_unchecked(GeneratorId::new(q, i), c.reindex(&positions[q]));
            }
        }
    }
    for (q, level) in run.phi.into_iter().enumerate() {
        for (i, c) in level.into_iter().enumerate() {
            phi.insert_unchecked(GeneratorId::new(q, i), c);
        }
    }
    for (q, gs) in run.g.into_iter().enumerate() {
        for (t, c) in gs.into_iter().enumerate() {
            g.insert_unchecked(GeneratorId::new(q, t), c);
        }
    }
    let mut inclusion = run.survivors;
    inclusion.truncate(target.num_levels());
    Ok(ChainContraction {
        source: Arc::clone(cc),
        target: Arc::new(target),
        f,
        g,
        phi,
        lambda: run.lambda,
        inclusion,
    })
}

/// Composes `inner: C → C'` with `outer: C' → C''` into
/// `(f'f, gg', λ'φ + gφ'f, λλ')`.
pub fn compose(outer: &ChainContraction, inner: &ChainContraction) -> Result<ChainContraction> {
    if !same_complex(&inner.target, &outer.source) {
        return Err(Error::ComplexMismatch(
            "inner target differs from outer source".into(),
        ));
    }
    let ring = *inner.ring();
    let f = outer.f.compose(&inner.f, &ring);
    let g = inner.g.compose(&outer.g, &ring);
    let correction = inner.g.compose(&outer.phi.compose(&inner.f, &ring), &ring);
    let phi = inner.phi.scaled(&outer.lambda, &ring).add_scaled(&BigInt::one(), &correction, &ring)?;
    let inclusion = outer
        .inclusion
        .iter()
        .enumerate()
        .map(|(q, level)| level.iter().map(|&i| inner.inclusion[q][i]).collect())
        .collect();
    Ok(ChainContraction {
        source: Arc::clone(&inner.source),
        target: Arc::clone(&outer.target),
        f,
        g,
        phi,
        lambda: ring.normalize(&inner.lambda * &outer.lambda),
        inclusion,
    })
}

/// Checks `d'f = fd`, `dg = gd'`, `fg = λ id`, `λ id − gf = φd + dφ` and
/// `fφ = 0`, generator by generator.
pub fn verify_contraction(c: &ChainContraction) -> Vec<Violation> {
    let ring = *c.ring();
    let (src, tgt) = (&c.source, &c.target);
    let lambda = ring.normalize(c.lambda.clone());
    let minus = -BigInt::one();
    let mut out = Vec::new();
    for a in src.all_generators() {
        let fa = c.f.image(a);
        let da = src.boundary(a);
        if tgt.d(&fa).terms() != c.f.apply(&da, &ring).terms() {
            out.push(Violation { identity: Identity::ChainMapF, generator: a });
        }
        let phi_a = c.phi.image(a);
        let mut lhs = Chain::generator(a).scaled(&lambda, &ring);
        let _ = lhs.axpy(&minus, &c.g.apply(&fa, &ring), &ring);
        let mut rhs = c.phi.apply(&da, &ring);
        let _ = rhs.axpy(&BigInt::one(), &src.d(&phi_a), &ring);
        if lhs.terms() != rhs.terms() {
            out.push(Violation { identity: Identity::Homotopy, generator: a });
        }
        if !c.f.apply(&phi_a, &ring).is_zero() {
            out.push(Violation { identity: Identity::Annihilation, generator: a });
        }
    }
    for t in tgt.all_generators() {
        let gt = c.g.image(t);
        if src.d(&gt).terms() != c.g.apply(&tgt.boundary(t), &ring).terms() {
            out.push(Violation { identity: Identity::ChainMapG, generator: t });
        }
        if c.f.apply(&gt, &ring).terms() != Chain::generator(t).scaled(&lambda, &ring).terms() {
            out.push(Violation { identity: Identity::Section, generator: t });
        }
    }
    if tgt.total_size() > src.total_size() {
        out.push(Violation { identity: Identity::Shape, generator: GeneratorId::new(0, 0) });
    }
    out
}

impl LambdaATModel {
    /// The model as a contraction onto the null-differential complex on `H`.
    pub fn as_contraction(&self) -> ChainContraction {
        let cc = &self.complex;
        let ring = *cc.coeffs();
        let positions: Vec<Vec<usize>> = (0..cc.num_levels())
            .map(|q| {
                let mut pos = vec![usize::MAX; cc.size(q)];
                for (t, &s) in self.h[q].iter().enumerate() {
                    pos[s] = t;
                }
                pos
            })
            .collect();
        let labels = self
            .h
            .iter()
            .enumerate()
            .map(|(q, hs)| hs.iter().map(|&i| cc.label(GeneratorId::new(q, i)).to_string()).collect())
            .collect();
        let mut f = GradedMap::new(0);
        for (id, c) in self.f.iter() {
            f.insert_unchecked(id, c.reindex(&positions[id.dim]));
        }
        let mut g = GradedMap::new(0);
        for (id, c) in self.g.iter() {
            g.insert_unchecked(GeneratorId::new(id.dim, positions[id.dim][id.index]), c.clone());
        }
        ChainContraction {
            source: Arc::clone(cc),
            target: Arc::new(ChainComplex::null_differential(ring, labels)),
            f,
            g,
            phi: self.phi.clone(),
            lambda: self.lambda.clone(),
            inclusion: self.h.clone(),
        }
    }

    /// Reads a contraction onto a null-differential complex as a model of
    /// its source.
    pub fn from_contraction(c: &ChainContraction) -> Result<LambdaATModel> {
        if !c.target.differential().is_empty() {
            return Err(Error::ComplexMismatch(
                "target differential is not null".into(),
            ));
        }
        let levels = c.source.num_levels();
        let mut h = c.inclusion.clone();
        h.resize(levels, Vec::new());
        let mut f = GradedMap::new(0);
        for (id, img) in c.f.iter() {
            f.insert_unchecked(id, img.reindex(&c.inclusion[id.dim]));
        }
        let mut g = GradedMap::new(0);
        for (id, img) in c.g.iter() {
            g.insert_unchecked(GeneratorId::new(id.dim, c.inclusion[id.dim][id.index]), img.clone());
        }
        Ok(LambdaATModel {
            complex: Arc::clone(&c.source),
            h,
            f,
            g,
            phi: c.phi.clone(),
            lambda: c.lambda.clone(),
            pivot_count: 0,
        })
    }
}

/// Lifts a model of the reduced complex back to the source of `reduction`.
pub fn compose_model(reduction: &ChainContraction, model: &LambdaATModel) -> Result<LambdaATModel> {
    let mut m = LambdaATModel::from_contraction(&compose(&model.as_contraction(), reduction)?)?;
    m.pivot_count = model.pivot_count;
    Ok(m)
}
