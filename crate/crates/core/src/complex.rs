//! Finite chain complexes `(C, d)` over `Z` or `Z/p`.

use num_bigint::BigInt;

use crate::chain::{Chain, GeneratorId, GradedMap};
use crate::coeff::CoefficientSpec;
use crate::error::{Error, Result};

/// Generator sets `C_0 .. C_n` plus a differential of degree −1.
///
/// Immutable once built. Generators are addressed by `(dim, index)`; the
/// textual labels exist for reports and debugging only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    coeffs: CoefficientSpec,
    labels: Vec<Vec<String>>,
    differential: GradedMap,
}

impl ChainComplex {
    /// Checks index ranges and image dimensions, and normalizes the
    /// differential into `coeffs`. Does not check `d∘d = 0`; see
    /// [`verify_complex`].
    pub fn new(coeffs: CoefficientSpec, labels: Vec<Vec<String>>, differential: GradedMap) -> Result<Self> {
        if differential.degree() != -1 {
            return Err(Error::InvalidComplex(format!(
                "differential has degree {}",
                differential.degree()
            )));
        }
        for (id, img) in differential.iter() {
            if id.dim >= labels.len() || id.index >= labels[id.dim].len() {
                return Err(Error::InvalidComplex(format!("unknown generator {id}")));
            }
            if id.dim == 0 {
                return Err(Error::InvalidComplex(format!("d0 is nonzero on {id}")));
            }
            let bound = labels[id.dim - 1].len();
            if let Some(&(last, _)) = img.terms().last() {
                if last >= bound {
                    return Err(Error::InvalidComplex(format!(
                        "boundary of {id} refers to missing generator c{}[{last}]",
                        id.dim - 1
                    )));
                }
            }
        }
        let differential = differential.reduce(&coeffs);
        Ok(ChainComplex {
            coeffs,
            labels,
            differential,
        })
    }

    /// The complex with no generators.
    pub fn empty(coeffs: CoefficientSpec) -> Self {
        ChainComplex {
            coeffs,
            labels: Vec::new(),
            differential: GradedMap::new(-1),
        }
    }

    pub fn coeffs(&self) -> &CoefficientSpec {
        &self.coeffs
    }

    /// Number of graded levels, `n + 1` for a complex of dimension `n`.
    pub fn num_levels(&self) -> usize {
        self.labels.len()
    }

    /// `|C_q|`, zero above the top dimension.
    pub fn size(&self, q: usize) -> usize {
        self.labels.get(q).map_or(0, Vec::len)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn total_size(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn generators(&self, q: usize) -> impl Iterator<Item = GeneratorId> {
        (0..self.size(q)).map(move |index| GeneratorId { dim: q, index })
    }

    pub fn all_generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        (0..self.num_levels()).flat_map(move |q| self.generators(q))
    }

    pub fn label(&self, id: GeneratorId) -> &str {
        &self.labels[id.dim][id.index]
    }

    pub fn labels(&self, q: usize) -> &[String] {
        self.labels.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn boundary_ref(&self, id: GeneratorId) -> Option<&Chain> {
        self.differential.get(id)
    }

    pub fn boundary(&self, id: GeneratorId) -> Chain {
        self.differential.image(id)
    }

    /// `d` extended linearly.
    pub fn d(&self, c: &Chain) -> Chain {
        self.differential.apply(c, &self.coeffs)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.labels
            .iter()
            .enumerate()
            .map(|(q, l)| if q % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Integer matrix of `d_q` with rows indexed by `C_{q-1}` and columns by
    /// `C_q`, as sparse columns.
    pub fn boundary_columns(&self, q: usize) -> Vec<Vec<(usize, BigInt)>> {
        self.generators(q)
            .map(|id| match self.boundary_ref(id) {
                Some(c) => c.terms().to_vec(),
                None => Vec::new(),
            })
            .collect()
    }

    /// Builds the complex with `d = 0` on the given labels.
    pub fn null_differential(coeffs: CoefficientSpec, labels: Vec<Vec<String>>) -> Self {
        ChainComplex {
            coeffs,
            labels,
            differential: GradedMap::new(-1),
        }
    }
}

/// First generator `a` with `d(d(a)) != 0`, if any.
pub fn dd_violation(cc: &ChainComplex) -> Option<GeneratorId> {
    cc.differential()
        .iter()
        .filter(|(id, _)| id.dim >= 2)
        .find(|(_, img)| !cc.d(img).is_zero())
        .map(|(id, _)| id)
}

/// True iff `d_q d_{q+1} = 0` for every `q`.
pub fn verify_complex(cc: &ChainComplex) -> bool {
    dd_violation(cc).is_none()
}

pub(crate) fn require_valid(cc: &ChainComplex) -> Result<()> {
    match dd_violation(cc) {
        None => Ok(()),
        Some(id) => Err(Error::InvalidComplex(format!("d(d({id})) is nonzero"))),
    }
}

/// Reduces an integral complex modulo a prime: same generators, `d mod p`.
pub fn reduce_mod_p(cc: &ChainComplex, p: u64) -> Result<ChainComplex> {
    let field = CoefficientSpec::prime_field(p)?;
    if *cc.coeffs() != CoefficientSpec::Integers {
        return Err(Error::CoefficientMismatch {
            expected: CoefficientSpec::Integers.to_string(),
            found: cc.coeffs().to_string(),
        });
    }
    Ok(ChainComplex {
        coeffs: field,
        labels: cc.labels.clone(),
        differential: cc.differential.reduce(&field),
    })
}
