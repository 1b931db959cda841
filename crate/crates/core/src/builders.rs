//! Chain complexes from simplicial facet lists and binary voxel images.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;

use crate::chain::{Chain, GeneratorId, GradedMap};
use crate::coeff::CoefficientSpec;
use crate::complex::ChainComplex;
use crate::error::{Error, Result};

/// A face-closed set of simplices, each stored as a strictly increasing
/// vertex tuple. `simplices[q]` holds the q-simplices in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    pub fn simplices(&self, q: usize) -> &[Vec<usize>] {
        self.simplices.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn num_levels(&self) -> usize {
        self.simplices.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Face closure of a list of simplices. Empty facets are ignored.
pub fn simplicial_from_facets<F: AsRef<[usize]>>(facets: &[F]) -> Result<SimplicialComplex> {
    let mut levels: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for facet in facets {
        let mut vs = facet.as_ref().to_vec();
        vs.sort_unstable();
        if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex { vertex: w[0] });
        }
        if vs.is_empty() {
            continue;
        }
        if vs.len() > 24 {
            return Err(Error::InvalidComplex(format!(
                "simplex with {} vertices is too large to close",
                vs.len()
            )));
        }
        if levels.len() < vs.len() {
            levels.resize_with(vs.len(), BTreeSet::new);
        }
        if levels[vs.len() - 1].contains(&vs) {
            continue;
        }
        for mask in 1u32..(1u32 << vs.len()) {
            let face: Vec<usize> = vs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            levels[face.len() - 1].insert(face);
        }
    }
    Ok(SimplicialComplex {
        simplices: levels.into_iter().map(|s| s.into_iter().collect()).collect(),
    })
}

fn simplex_label(s: &[usize]) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// The oriented simplicial chain complex over `Z`:
/// `d(v_0 .. v_q) = Σ_i (−1)^i v_0 .. v̂_i .. v_q`.
pub fn simplicial_chain_complex(sc: &SimplicialComplex) -> ChainComplex {
    let z = CoefficientSpec::Integers;
    let labels: Vec<Vec<String>> = sc
        .simplices
        .iter()
        .map(|level| level.iter().map(|s| simplex_label(s)).collect())
        .collect();
    let mut d = GradedMap::new(-1);
    for q in 1..sc.simplices.len() {
        let lower: HashMap<&[usize], usize> = sc.simplices[q - 1]
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        for (index, s) in sc.simplices[q].iter().enumerate() {
            let mut terms = Vec::with_capacity(s.len());
            let mut face = Vec::with_capacity(s.len() - 1);
            for omit in 0..s.len() {
                face.clear();
                face.extend(s.iter().enumerate().filter(|&(i, _)| i != omit).map(|(_, &v)| v));
                let sign = if omit % 2 == 0 { 1 } else { -1 };
                terms.push((lower[face.as_slice()], BigInt::from(sign)));
            }
            d.insert_unchecked(GeneratorId::new(q, index), Chain::from_terms(q - 1, terms, &z));
        }
    }
    ChainComplex::new(z, labels, d).expect("simplicial closure yields a well-formed complex")
}

/// An elementary cube `I_1 × … × I_k`: each interval is `[lo, lo]` or
/// `[lo, lo + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryCube {
    intervals: Vec<(i64, bool)>,
}

impl ElementaryCube {
    /// `intervals[j] = (lo, nondegenerate)`.
    pub fn new(intervals: Vec<(i64, bool)>) -> Self {
        ElementaryCube { intervals }
    }

    pub fn voxel(x: i64, y: i64, z: i64) -> Self {
        ElementaryCube::new(vec![(x, true), (y, true), (z, true)])
    }

    pub fn intervals(&self) -> &[(i64, bool)] {
        &self.intervals
    }

    pub fn dim(&self) -> usize {
        self.intervals.iter().filter(|(_, n)| *n).count()
    }

    /// The two facets obtained by collapsing the nondegenerate interval at
    /// axis `axis`: `(lower, upper)`.
    fn collapse(&self, axis: usize) -> (ElementaryCube, ElementaryCube) {
        let (lo, _) = self.intervals[axis];
        let mut lower = self.clone();
        lower.intervals[axis] = (lo, false);
        let mut upper = self.clone();
        upper.intervals[axis] = (lo + 1, false);
        (lower, upper)
    }
}

impl fmt::Display for ElementaryCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, &(lo, nd)) in self.intervals.iter().enumerate() {
            if j > 0 {
                write!(f, "x")?;
            }
            write!(f, "[{},{}]", lo, if nd { lo + 1 } else { lo })?;
        }
        Ok(())
    }
}

/// A face-closed set of elementary cubes, grouped by dimension and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CubicalComplex {
    cells: Vec<Vec<ElementaryCube>>,
}

impl CubicalComplex {
    pub fn cells(&self, q: usize) -> &[ElementaryCube] {
        self.cells.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Face closure of a set of elementary cubes of a common ambient dimension.
pub fn cubical_from_cubes<I: IntoIterator<Item = ElementaryCube>>(cubes: I) -> CubicalComplex {
    let mut levels: Vec<BTreeSet<ElementaryCube>> = Vec::new();
    let mut stack: Vec<ElementaryCube> = cubes.into_iter().collect();
    while let Some(cube) = stack.pop() {
        let k = cube.dim();
        if levels.len() <= k {
            levels.resize_with(k + 1, BTreeSet::new);
        }
        if levels[k].contains(&cube) {
            continue;
        }
        for axis in 0..cube.intervals.len() {
            if cube.intervals[axis].1 {
                let (lo, hi) = cube.collapse(axis);
                stack.push(lo);
                stack.push(hi);
            }
        }
        levels[k].insert(cube);
    }
    CubicalComplex {
        cells: levels.into_iter().map(|s| s.into_iter().collect()).collect(),
    }
}

/// Closed unit cubes for every black voxel of an `X × Y × Z` image.
pub fn cubical_from_voxels(dims: (usize, usize, usize), black: &[(i64, i64, i64)]) -> Result<CubicalComplex> {
    let (dx, dy, dz) = dims;
    let inside = |v: i64, n: usize| v >= 0 && (v as u64) < n as u64;
    let mut voxels = Vec::with_capacity(black.len());
    for &(x, y, z) in black {
        if !(inside(x, dx) && inside(y, dy) && inside(z, dz)) {
            return Err(Error::VoxelOutOfRange { x, y, z, dx, dy, dz });
        }
        voxels.push(ElementaryCube::voxel(x, y, z));
    }
    Ok(cubical_from_cubes(voxels))
}

/// The cubical chain complex over `Z`. Collapsing the i-th nondegenerate
/// interval (1-based) contributes `(−1)^(i−1) · (upper − lower)`.
pub fn cubical_chain_complex(cx: &CubicalComplex) -> ChainComplex {
    let z = CoefficientSpec::Integers;
    let labels: Vec<Vec<String>> = cx
        .cells
        .iter()
        .map(|level| level.iter().map(ElementaryCube::to_string).collect())
        .collect();
    let mut d = GradedMap::new(-1);
    for q in 1..cx.cells.len() {
        let lower: HashMap<&ElementaryCube, usize> =
            cx.cells[q - 1].iter().enumerate().map(|(i, c)| (c, i)).collect();
        for (index, cube) in cx.cells[q].iter().enumerate() {
            let mut terms = Vec::with_capacity(2 * q);
            let mut sign = 1i64;
            for axis in 0..cube.intervals.len() {
                if !cube.intervals[axis].1 {
                    continue;
                }
                let (lo, hi) = cube.collapse(axis);
                terms.push((lower[&hi], BigInt::from(sign)));
                terms.push((lower[&lo], BigInt::from(-sign)));
                sign = -sign;
            }
            d.insert_unchecked(GeneratorId::new(q, index), Chain::from_terms(q - 1, terms, &z));
        }
    }
    ChainComplex::new(z, labels, d).expect("cubical closure yields a well-formed complex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::verify_complex;

    fn find(cc: &ChainComplex, q: usize, label: &str) -> GeneratorId {
        cc.generators(q).find(|&g| cc.label(g) == label).unwrap()
    }

    #[test]
    fn two_triangle_strip_counts() {
        let facets: Vec<Vec<usize>> = vec![
            vec![1, 2, 4],
            vec![2, 3, 4],
            vec![1, 2],
            vec![2, 3],
            vec![3, 4],
            vec![2, 4],
            vec![1, 4],
            vec![1],
            vec![2],
            vec![3],
            vec![4],
        ];
        let sc = simplicial_from_facets(&facets).unwrap();
        assert_eq!(sc.counts(), vec![4, 5, 2]);
        assert_eq!(sc.len(), 11);
    }

    #[test]
    fn small_closures() {
        let sc = simplicial_from_facets(&[vec![7]]).unwrap();
        assert_eq!(sc.counts(), vec![1]);
        let sc = simplicial_from_facets(&[vec![2, 0, 1]]).unwrap();
        assert_eq!(sc.counts(), vec![3, 3, 1]);
        assert_eq!(sc.simplices(2), &[vec![0, 1, 2]]);
        assert!(matches!(
            simplicial_from_facets(&[vec![1, 1, 2]]),
            Err(Error::DuplicateVertex { vertex: 1 })
        ));
    }

    #[test]
    fn triangle_boundary_signs() {
        let cc = simplicial_chain_complex(&simplicial_from_facets(&[vec![0, 1, 2]]).unwrap());
        let t = find(&cc, 2, "0 1 2");
        let bd = cc.boundary(t);
        assert_eq!(bd.coefficient(find(&cc, 1, "1 2")), BigInt::from(1));
        assert_eq!(bd.coefficient(find(&cc, 1, "0 2")), BigInt::from(-1));
        assert_eq!(bd.coefficient(find(&cc, 1, "0 1")), BigInt::from(1));
        let e = find(&cc, 1, "0 1");
        let be = cc.boundary(e);
        assert_eq!(be.coefficient(find(&cc, 0, "1")), BigInt::from(1));
        assert_eq!(be.coefficient(find(&cc, 0, "0")), BigInt::from(-1));
        assert!(cc.boundary(find(&cc, 0, "0")).is_zero());
        assert!(cc.d(&bd).is_zero());
        assert!(verify_complex(&cc));
    }

    #[test]
    fn voxel_counts() {
        let one = cubical_from_voxels((1, 1, 1), &[(0, 0, 0)]).unwrap();
        assert_eq!(one.counts(), vec![8, 12, 6, 1]);
        let two = cubical_from_voxels((2, 1, 1), &[(0, 0, 0), (1, 0, 0)]).unwrap();
        assert_eq!(two.counts(), vec![12, 20, 11, 2]);
        let none = cubical_from_voxels((3, 3, 3), &[]).unwrap();
        assert!(none.is_empty());
        assert_eq!(cubical_chain_complex(&none).num_levels(), 0);
        assert!(matches!(
            cubical_from_voxels((2, 2, 2), &[(2, 0, 0)]),
            Err(Error::VoxelOutOfRange { .. })
        ));
        assert!(cubical_from_voxels((2, 2, 2), &[(0, -1, 0)]).is_err());
    }

    #[test]
    fn cube_boundaries() {
        let cc = cubical_chain_complex(&cubical_from_voxels((1, 1, 1), &[(0, 0, 0)]).unwrap());
        let e = find(&cc, 1, "[0,1]x[0,0]x[0,0]");
        let be = cc.boundary(e);
        assert_eq!(be.coefficient(find(&cc, 0, "[1,1]x[0,0]x[0,0]")), BigInt::from(1));
        assert_eq!(be.coefficient(find(&cc, 0, "[0,0]x[0,0]x[0,0]")), BigInt::from(-1));
        assert_eq!(be.len(), 2);
        let sq = find(&cc, 2, "[0,1]x[0,1]x[0,0]");
        assert_eq!(cc.boundary(sq).len(), 4);
        assert!(cc.d(&cc.boundary(sq)).is_zero());
        assert!(verify_complex(&cc));
        assert_eq!(cc.euler_characteristic(), 1);
    }

    #[test]
    fn planar_image_is_accepted() {
        let cx = cubical_from_voxels((2, 2, 1), &[(0, 0, 0), (1, 1, 0)]).unwrap();
        // Two cubes sharing one vertical edge.
        assert_eq!(cx.counts(), vec![14, 23, 12, 2]);
        assert!(verify_complex(&cubical_chain_complex(&cx)));
    }
}
