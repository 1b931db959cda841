//! Incremental elimination shared by the lambda-AT-model construction and the
//! unit-pivot preprocessing.
//!
//! Dimension by dimension, the engine keeps the matrix `N = f_{q-1} ∘ d_q`
//! restricted to surviving rows (generators of dimension `q-1` not yet
//! killed) and unprocessed columns (generators of dimension `q`). Each pivot
//! `(α, β)` kills row `α`, consumes column `β` and applies the rank-one
//! update to `N`, to `f` on `C_{q-1}` and to `φ` on `C_{q-1}`.
//!
//! Over `Z` the update is written with the sign already normalized, so `λ`
//! stays positive: with `x = N[α, β]`,
//!
//! ```text
//! f(b) := |x| f(b) − sgn(x) <f(b), α> γ
//! φ(b) := |x| φ(b) + sgn(x) <f(b), α> γ'
//! λ    := |x| λ
//! ```
//!
//! and every `f`, `φ` of lower dimension is multiplied by `|x|`. Over `Z/p`
//! the model is rescaled by `x⁻¹` after every pivot so `λ` stays `1`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::chain::{Chain, GeneratorId};
use crate::coeff::CoefficientSpec;
use crate::complex::ChainComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PivotRule {
    /// Exhaust `N`, always pivoting on an entry of least size.
    Minimal,
    /// Pivot only on entries `±1`; stop when none is left.
    UnitOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Pivot {
    pub killed: GeneratorId,
    pub consumed: GeneratorId,
    pub value: BigInt,
}

pub(crate) struct Elimination {
    pub lambda: BigInt,
    /// Surviving generators per dimension, ascending.
    pub survivors: Vec<Vec<usize>>,
    /// `f` on every generator, chains supported on survivors.
    pub f: Vec<Vec<Chain>>,
    /// `φ` on every generator.
    pub phi: Vec<Vec<Chain>>,
    /// `g` on survivors, aligned with `survivors`.
    pub g: Vec<Vec<Chain>>,
    /// `f d` on survivors, aligned with `survivors`. Zero under `Minimal`.
    pub reduced_d: Vec<Vec<Chain>>,
    pub pivots: Vec<Pivot>,
}

struct Stage<'a> {
    ring: CoefficientSpec,
    /// Columns of N over C_q; `None` once consumed.
    cols: Vec<Option<Chain>>,
    /// row α → columns with a nonzero entry in row α.
    row_cols: Vec<BTreeSet<usize>>,
    /// row α → generators b of C_{q-1} with <f(b), α> ≠ 0.
    row_f: Vec<BTreeSet<usize>>,
    queue: BTreeSet<(BigInt, usize, usize)>,
    cc: &'a ChainComplex,
}

impl Stage<'_> {
    fn index_col(&mut self, c: usize) {
        if let Some(col) = &self.cols[c] {
            for &(row, ref v) in col.terms() {
                self.row_cols[row].insert(c);
                self.queue.insert((self.ring.pivot_size(v), row, c));
            }
        }
    }

    fn unindex_col(&mut self, c: usize) {
        if let Some(col) = &self.cols[c] {
            for &(row, ref v) in col.terms() {
                self.row_cols[row].remove(&c);
                self.queue.remove(&(self.ring.pivot_size(v), row, c));
            }
        }
    }
}

/// Runs the elimination on `cc`. Coefficients follow `cc.coeffs()`.
pub(crate) fn eliminate(cc: &ChainComplex, rule: PivotRule) -> Elimination {
    let ring = *cc.coeffs();
    let levels = cc.num_levels();
    let mut lambda = BigInt::one();
    let mut f: Vec<Vec<Chain>> = (0..levels).map(|q| vec![Chain::zero(q); cc.size(q)]).collect();
    let mut phi: Vec<Vec<Chain>> = (0..levels).map(|q| vec![Chain::zero(q + 1); cc.size(q)]).collect();
    let mut survivors: Vec<Vec<usize>> = vec![Vec::new(); levels];
    let mut g: Vec<Vec<Chain>> = vec![Vec::new(); levels];
    let mut reduced_d: Vec<Vec<Chain>> = vec![Vec::new(); levels];
    let mut pivots = Vec::new();

    if levels == 0 {
        return Elimination {
            lambda,
            survivors,
            f,
            phi,
            g,
            reduced_d,
            pivots,
        };
    }

    // Dimension 0: everything survives, f = g = id, φ = 0.
    let mut alive: BTreeSet<usize> = (0..cc.size(0)).collect();
    for (v, fv) in f[0].iter_mut().enumerate() {
        *fv = Chain::generator(GeneratorId::new(0, v));
    }
    let mut g_prev: Vec<Option<Chain>> = (0..cc.size(0))
        .map(|v| Some(Chain::generator(GeneratorId::new(0, v))))
        .collect();
    let mut d_prev: Vec<Option<Chain>> = vec![Some(Chain::zero(0)); cc.size(0)];

    for q in 1..levels {
        let rows = cc.size(q - 1);
        let mut stage = Stage {
            ring,
            cols: Vec::with_capacity(cc.size(q)),
            row_cols: vec![BTreeSet::new(); rows],
            row_f: vec![BTreeSet::new(); rows],
            queue: BTreeSet::new(),
            cc,
        };
        for (b, fb) in f[q - 1].iter().enumerate() {
            for row in fb.indices() {
                stage.row_f[row].insert(b);
            }
        }
        for c in 0..cc.size(q) {
            let mut col = Chain::zero(q - 1);
            if let Some(bd) = cc.boundary_ref(GeneratorId::new(q, c)) {
                for &(b, ref coef) in bd.terms() {
                    let _ = col.axpy(coef, &f[q - 1][b], &ring);
                }
            }
            stage.cols.push(Some(col));
            stage.index_col(c);
        }

        while let Some((size, alpha, beta)) = stage.queue.iter().next().cloned() {
            if rule == PivotRule::UnitOnly && !size.is_one() {
                break;
            }
            stage.unindex_col(beta);
            let gamma = stage.cols[beta].take().expect("queued column is live");
            let x = gamma.coeff_at(alpha).cloned().expect("pivot entry is nonzero");

            // γ' = λβ − φ(d β)
            let mut gamma_prime = Chain::generator(GeneratorId::new(q, beta)).scaled(&lambda, &ring);
            if let Some(bd) = stage.cc.boundary_ref(GeneratorId::new(q, beta)) {
                for &(b, ref coef) in bd.terms() {
                    let _ = gamma_prime.axpy(&ring.neg(coef), &phi[q - 1][b], &ring);
                }
            }

            let (scale, mult) = match ring {
                CoefficientSpec::Integers => {
                    let sign = if x.is_negative() { -BigInt::one() } else { BigInt::one() };
                    (x.abs(), sign)
                }
                CoefficientSpec::PrimeField(_) => {
                    (BigInt::one(), ring.inverse(&x).expect("field pivot is a unit"))
                }
            };

            // Coefficients along row α, read before any rescaling.
            let f_hits: Vec<(usize, BigInt)> = stage.row_f[alpha]
                .iter()
                .map(|&b| (b, f[q - 1][b].coeff_at(alpha).cloned().unwrap()))
                .collect();
            let n_hits: Vec<(usize, BigInt)> = stage.row_cols[alpha]
                .iter()
                .map(|&c| (c, stage.cols[c].as_ref().unwrap().coeff_at(alpha).cloned().unwrap()))
                .collect();

            if !scale.is_one() {
                for r in 0..q {
                    for chain in f[r].iter_mut().chain(phi[r].iter_mut()) {
                        chain.scale(&scale, &ring);
                    }
                }
                let live: Vec<usize> = (0..stage.cols.len()).filter(|&c| stage.cols[c].is_some()).collect();
                stage.queue.clear();
                for &c in &live {
                    stage.cols[c].as_mut().unwrap().scale(&scale, &ring);
                }
                for &c in &live {
                    for &(row, ref v) in stage.cols[c].as_ref().unwrap().terms() {
                        stage.queue.insert((ring.pivot_size(v), row, c));
                    }
                }
                lambda *= &scale;
            }

            for (b, coef) in f_hits {
                let t = ring.mul(&mult, &coef);
                for row in f[q - 1][b].indices() {
                    stage.row_f[row].remove(&b);
                }
                let _ = f[q - 1][b].axpy(&ring.neg(&t), &gamma, &ring);
                for row in f[q - 1][b].indices() {
                    stage.row_f[row].insert(b);
                }
                let _ = phi[q - 1][b].axpy(&t, &gamma_prime, &ring);
            }
            for (c, coef) in n_hits {
                let t = ring.mul(&mult, &coef);
                stage.unindex_col(c);
                let col = stage.cols[c].as_mut().unwrap();
                let _ = col.axpy(&ring.neg(&t), &gamma, &ring);
                stage.index_col(c);
            }
            debug_assert!(stage.row_f[alpha].is_empty());
            debug_assert!(stage.row_cols[alpha].is_empty());

            alive.remove(&alpha);
            g_prev[alpha] = None;
            d_prev[alpha] = None;
            pivots.push(Pivot {
                killed: GeneratorId::new(q - 1, alpha),
                consumed: GeneratorId::new(q, beta),
                value: x,
            });
        }

        // Rows still alive are the final survivors of dimension q − 1.
        finish_level(q - 1, &alive, &mut g_prev, &mut d_prev, &mut survivors, &mut g, &mut reduced_d);

        // Unconsumed columns survive in dimension q.
        let cols = std::mem::take(&mut stage.cols);
        alive = BTreeSet::new();
        g_prev = vec![None; cc.size(q)];
        d_prev = vec![None; cc.size(q)];
        for (c, col) in cols.into_iter().enumerate() {
            let Some(col) = col else { continue };
            let id = GeneratorId::new(q, c);
            alive.insert(c);
            f[q][c] = Chain::generator(id);
            let mut gc = Chain::generator(id).scaled(&lambda, &ring);
            if let Some(bd) = cc.boundary_ref(id) {
                for &(b, ref coef) in bd.terms() {
                    let _ = gc.axpy(&ring.neg(coef), &phi[q - 1][b], &ring);
                }
            }
            g_prev[c] = Some(gc);
            d_prev[c] = Some(col);
        }
    }
    finish_level(levels - 1, &alive, &mut g_prev, &mut d_prev, &mut survivors, &mut g, &mut reduced_d);

    Elimination {
        lambda,
        survivors,
        f,
        phi,
        g,
        reduced_d,
        pivots,
    }
}

fn finish_level(
    q: usize,
    alive: &BTreeSet<usize>,
    g_prev: &mut [Option<Chain>],
    d_prev: &mut [Option<Chain>],
    survivors: &mut [Vec<usize>],
    g: &mut [Vec<Chain>],
    reduced_d: &mut [Vec<Chain>],
) {
    for &a in alive {
        survivors[q].push(a);
        g[q].push(g_prev[a].take().expect("survivor has g"));
        let d = d_prev[a].take().unwrap_or_else(|| Chain::zero(q.saturating_sub(1)));
        reduced_d[q].push(d);
    }
}
