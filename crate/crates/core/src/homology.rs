//! Integer homological information from a lambda-AT-model over `Z` and
//! AT-models over `Z/p` for every prime dividing `λ`.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::thread;

use num_bigint::BigInt;

use crate::atmodel::{compute_lambda_at_model, prime_to_u64, representative_cycles, torsion_prime_candidates};
use crate::chain::Chain;
use crate::coeff::CoefficientSpec;
use crate::complex::{reduce_mod_p, require_valid, ChainComplex};
use crate::error::{Error, Result};
use crate::reduce::{preprocess, ChainContraction};

/// Mod-p ranks and torsion counts for one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionTable {
    /// `β_(q,p) = dim H_q(C; Z/p)`.
    pub beta_p: Vec<usize>,
    /// `T_(q,p)`: number of invariant factors of `H_q(C; Z)` that are powers
    /// of `p`.
    pub t: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyReport {
    pub betti: Vec<usize>,
    pub lambda: BigInt,
    pub torsion: BTreeMap<u64, TorsionTable>,
    /// `G`: independent non-boundary cycles over `Z`, one per element of `H`.
    pub cycles_z: Vec<Chain>,
    /// `G_{Z/p}` for every prime dividing `λ`.
    pub cycles_mod_p: BTreeMap<u64, Vec<Chain>>,
    /// Generator counts of the complex the models were built on.
    pub working_sizes: Vec<usize>,
    pub pivot_count: usize,
}

impl HomologyReport {
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.betti)
    }
}

pub(crate) fn alternating_sum(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum()
}

/// Alternating sum of generator counts.
pub fn euler_characteristic(cc: &ChainComplex) -> i64 {
    cc.euler_characteristic()
}

/// `T_(0,p) = β_(0,p) − β_0`, `T_(q,p) = β_(q,p) − β_q − T_(q−1,p)`.
pub fn torsion_recurrence(beta: &[usize], beta_p: &[usize]) -> Result<Vec<usize>> {
    if beta.len() != beta_p.len() {
        return Err(Error::InvalidComplex(format!(
            "rank sequences of different lengths ({} and {})",
            beta.len(),
            beta_p.len()
        )));
    }
    let mut out = Vec::with_capacity(beta.len());
    let mut prev = 0i64;
    for (q, (&b, &bp)) in beta.iter().zip(beta_p).enumerate() {
        let t = bp as i64 - b as i64 - prev;
        if t < 0 {
            return Err(Error::InconsistentTorsion { q, value: t });
        }
        out.push(t as usize);
        prev = t;
    }
    Ok(out)
}

fn padded(mut v: Vec<usize>, len: usize) -> Vec<usize> {
    v.resize(len, 0);
    v
}

fn lift(reduction: Option<&ChainContraction>, ring: &CoefficientSpec, cycles: Vec<Chain>) -> Vec<Chain> {
    match reduction {
        None => cycles,
        Some(r) => cycles.iter().map(|c| r.g.apply(c, ring)).collect(),
    }
}

/// `(p, β_(·,p), cycles over Z/p)` from one modular run.
type PrimeRun = (u64, Vec<usize>, Vec<Chain>);

/// Betti numbers, per-prime torsion counts and representative cycles.
///
/// With `use_preprocess` the unit-pivot reduction runs first; every model
/// is then built on the reduced complex and cycles are lifted back through
/// the reduction's `g`.
pub fn compute_integer_homology(cc: &Arc<ChainComplex>, use_preprocess: bool) -> Result<HomologyReport> {
    if *cc.coeffs() != CoefficientSpec::Integers {
        return Err(Error::CoefficientMismatch {
            expected: CoefficientSpec::Integers.to_string(),
            found: cc.coeffs().to_string(),
        });
    }
    require_valid(cc)?;
    let levels = cc.num_levels();
    let reduction = if use_preprocess { Some(preprocess(cc)?) } else { None };
    let working = reduction.as_ref().map_or_else(|| Arc::clone(cc), |r| Arc::clone(&r.target));

    let model = compute_lambda_at_model(&working)?;
    let betti = padded(model.h_sizes(), levels);
    let z = CoefficientSpec::Integers;
    let cycles_z = lift(reduction.as_ref(), &z, representative_cycles(&model));

    let primes = torsion_prime_candidates(&model)
        .iter()
        .map(|p| {
            prime_to_u64(p).ok_or_else(|| Error::InvalidComplex(format!("prime {p} exceeds 64 bits")))
        })
        .collect::<Result<Vec<u64>>>()?;

    let per_prime: Vec<Result<PrimeRun>> = thread::scope(|s| {
        let handles: Vec<_> = primes
            .iter()
            .map(|&p| {
                let working = &working;
                let reduction = reduction.as_ref();
                s.spawn(move || -> Result<(u64, Vec<usize>, Vec<Chain>)> {
                    let field = CoefficientSpec::prime_field(p)?;
                    let cc_p = Arc::new(reduce_mod_p(working, p)?);
                    let m = compute_lambda_at_model(&cc_p)?;
                    let cycles = match reduction {
                        None => representative_cycles(&m),
                        Some(r) => {
                            let g = r.g.reduce(&field);
                            representative_cycles(&m).iter().map(|c| g.apply(c, &field)).collect()
                        }
                    };
                    Ok((p, padded(m.h_sizes(), levels), cycles))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("mod-p worker panicked")).collect()
    });

    let mut torsion = BTreeMap::new();
    let mut cycles_mod_p = BTreeMap::new();
    for r in per_prime {
        let (p, beta_p, cycles) = r?;
        let t = torsion_recurrence(&betti, &beta_p)?;
        torsion.insert(p, TorsionTable { beta_p, t });
        cycles_mod_p.insert(p, cycles);
    }

    Ok(HomologyReport {
        betti,
        lambda: model.lambda.clone(),
        torsion,
        cycles_z,
        cycles_mod_p,
        working_sizes: working.sizes(),
        pivot_count: model.pivot_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cubical_chain_complex, cubical_from_voxels, simplicial_chain_complex, simplicial_from_facets};

    #[test]
    fn recurrence_cases() {
        assert_eq!(torsion_recurrence(&[1, 1, 0], &[1, 2, 1]).unwrap(), vec![0, 1, 0]);
        assert_eq!(torsion_recurrence(&[1, 2, 1], &[1, 2, 1]).unwrap(), vec![0, 0, 0]);
        assert_eq!(torsion_recurrence(&[3, 0], &[3, 0]).unwrap(), vec![0, 0]);
        assert!(matches!(
            torsion_recurrence(&[1, 2, 1], &[1, 1, 1]),
            Err(Error::InconsistentTorsion { q: 1, value: -1 })
        ));
        assert!(torsion_recurrence(&[1], &[1, 0]).is_err());
    }

    #[test]
    fn single_vertex_report() {
        let cc = Arc::new(simplicial_chain_complex(&simplicial_from_facets(&[vec![0]]).unwrap()));
        for pre in [false, true] {
            let r = compute_integer_homology(&cc, pre).unwrap();
            assert_eq!(r.betti, vec![1]);
            assert_eq!(r.lambda, BigInt::from(1));
            assert!(r.torsion.is_empty());
            assert_eq!(r.cycles_z.len(), 1);
        }
    }

    #[test]
    fn voxel_euler() {
        let cc = cubical_chain_complex(&cubical_from_voxels((1, 1, 1), &[(0, 0, 0)]).unwrap());
        assert_eq!(euler_characteristic(&cc), 1);
        let r = compute_integer_homology(&Arc::new(cc), true).unwrap();
        assert_eq!(r.betti, vec![1, 0, 0, 0]);
        assert_eq!(r.euler_characteristic(), 1);
    }

    #[test]
    fn empty_complex() {
        let cc = Arc::new(ChainComplex::empty(CoefficientSpec::Integers));
        let r = compute_integer_homology(&cc, true).unwrap();
        assert!(r.betti.is_empty());
        assert_eq!(r.euler_characteristic(), 0);
    }
}
