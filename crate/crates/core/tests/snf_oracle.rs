mod common;

use std::sync::Arc;

use lambda_at::builders::{simplicial_chain_complex, simplicial_from_facets};
use lambda_at::oracle::{
    homology_via_snf, rho_at_model, smith_normal_form, smith_normal_form_with_transforms, torsion_witnesses,
    IntegerMatrix,
};
use lambda_at::{verify_complex, verify_model, ChainComplex, CoefficientSpec, Error, GeneratorId, GradedMap};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Fraction-free Gaussian elimination; exact determinant of a square matrix.
fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

#[test]
fn bareiss_sanity() {
    let m = vec![vec![big(2), big(1)], vec![big(7), big(4)]];
    assert_eq!(bareiss_det(&m), big(1));
    let m = vec![vec![big(0), big(1)], vec![big(1), big(0)]];
    assert_eq!(bareiss_det(&m), big(-1));
}

#[test]
fn diagonal_examples() {
    let d = smith_normal_form(&IntegerMatrix::from_dense(&[vec![2i64, 0], vec![0, 3]]));
    assert_eq!(d.diagonal, vec![big(1), big(6)]);
    let z = smith_normal_form(&IntegerMatrix::zeros(3, 2));
    assert_eq!(z.rank, 0);
    assert!(z.diagonal.iter().all(Zero::is_zero));
    let id: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| i64::from(i == j)).collect()).collect();
    let r = smith_normal_form(&IntegerMatrix::from_dense(&id));
    assert_eq!(r.rank, 4);
    assert!(r.diagonal.iter().all(One::is_one));
}

proptest! {
    #[test]
    fn divisibility_chain_and_rank(m in arb_matrix()) {
        let r = smith_normal_form(&IntegerMatrix::from_dense(&m));
        let nz: Vec<_> = r.diagonal.iter().filter(|v| !v.is_zero()).collect();
        prop_assert_eq!(nz.len(), r.rank);
        prop_assert!(r.rank <= m.len().min(m[0].len()));
        for w in nz.windows(2) {
            prop_assert!(w[1].is_multiple_of(w[0]));
        }
        prop_assert!(r.diagonal.iter().all(|v| !v.is_negative()));
    }

    #[test]
    fn invariant_under_permutation(
        (m, rp, cp) in arb_matrix().prop_flat_map(|m| {
            let (r, c) = (m.len(), m[0].len());
            (Just(m), permutation(r), permutation(c))
        })
    ) {
        let a = IntegerMatrix::from_dense(&m);
        let b = a.permuted(&rp, &cp);
        prop_assert_eq!(smith_normal_form(&a), smith_normal_form(&b));
    }

    #[test]
    fn transforms_are_unimodular(m in arb_matrix()) {
        let a = IntegerMatrix::from_dense(&m);
        let dec = smith_normal_form_with_transforms(&a);
        prop_assert_eq!(matmul(&matmul(&dec.u, &a.to_dense()), &dec.v), dec.d.clone());
        prop_assert_eq!(bareiss_det(&dec.u).abs(), BigInt::one());
        prop_assert_eq!(bareiss_det(&dec.v).abs(), BigInt::one());
        let n = dec.u.len();
        let ident: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
        prop_assert_eq!(matmul(&dec.u, &dec.u_inv), ident);
        prop_assert_eq!(&dec.result, &smith_normal_form(&a));
    }
}

#[test]
fn fixture_homology() {
    let klein = homology_via_snf(&common::simplicial_fixture("klein.txt")).unwrap();
    assert_eq!(klein.betti, vec![1, 1, 0]);
    assert_eq!(klein.factors[1], vec![big(2)]);
    let torus = homology_via_snf(&common::simplicial_fixture("torus.txt")).unwrap();
    assert_eq!(torus.betti, vec![1, 2, 1]);
    assert!(torus.factors.iter().all(Vec::is_empty));
    let rp2 = homology_via_snf(&common::simplicial_fixture("rp2.txt")).unwrap();
    assert_eq!(rp2.betti, vec![1, 0, 0]);
    assert_eq!(rp2.factors[1], vec![big(2)]);
}

#[test]
fn oracle_euler_identity() {
    for (name, cc) in common::all_fixtures() {
        let o = homology_via_snf(&cc).unwrap();
        let from_betti: i64 = o.betti.iter().enumerate().map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        assert_eq!(from_betti, cc.euler_characteristic(), "{name}");
    }
}

#[test]
fn witnesses_certify_torsion() {
    for (name, expected) in [("klein.txt", 1), ("rp2.txt", 1), ("torus.txt", 0)] {
        let cc = common::simplicial_fixture(name);
        let ws = torsion_witnesses(&cc).unwrap();
        assert_eq!(ws.len(), expected, "{name}");
        for w in ws {
            assert_eq!(w.mu, big(2));
            assert!(cc.d(&w.a).is_zero(), "witness a is a cycle");
            let db = cc.d(&w.b);
            assert_eq!(db, w.a.scaled(&w.mu, cc.coeffs()), "d(b) = μa");
        }
    }
}

/// A complex in normal form: C_2 -> C_1 -> C_0 with d_2 = diag(entries) and d_1 = 0.
fn diagonal_complex(entries: &[i64], extra_top: usize) -> Arc<ChainComplex> {
    let n1 = entries.len() + 1;
    let n2 = entries.len() + extra_top;
    let labels = vec![
        vec!["v".to_string()],
        (0..n1).map(|i| format!("e{i}")).collect(),
        (0..n2).map(|i| format!("t{i}")).collect(),
    ];
    let mut d = GradedMap::new(-1);
    let z = CoefficientSpec::Integers;
    for (i, &mu) in entries.iter().enumerate() {
        let img = lambda_at::Chain::generator(GeneratorId::new(1, i)).scaled(&big(mu), &z);
        d.set(GeneratorId::new(2, i), img).unwrap();
    }
    Arc::new(ChainComplex::new(z, labels, d).unwrap())
}

#[test]
fn rho_model_examples() {
    let zero = diagonal_complex(&[], 2);
    let m = rho_at_model(&zero).unwrap();
    assert_eq!(m.lambda, big(1));
    assert_eq!(m.h_sizes(), zero.sizes());
    assert!(verify_model(&m).is_empty());

    let two = diagonal_complex(&[2], 0);
    let m = rho_at_model(&two).unwrap();
    assert_eq!(m.lambda, big(2));
    assert_eq!(m.h_sizes(), vec![1, 1, 0]);
    assert!(verify_model(&m).is_empty());

    let mixed = diagonal_complex(&[1, 2, 3], 1);
    let m = rho_at_model(&mixed).unwrap();
    assert_eq!(m.lambda, big(6));
    assert!(verify_model(&m).is_empty());
    let oracle = homology_via_snf(&mixed).unwrap();
    let primes: Vec<BigInt> = oracle.torsion_primes().into_iter().collect();
    assert_eq!(primes, vec![big(2), big(3)]);
    assert_eq!(lambda_at::torsion_prime_candidates(&m), primes);
}

#[test]
fn rho_model_rejects_general_complex() {
    let sc = simplicial_from_facets(&[vec![0, 1, 2]]).unwrap();
    let cc = Arc::new(simplicial_chain_complex(&sc));
    assert!(verify_complex(&cc));
    assert!(matches!(rho_at_model(&cc), Err(Error::NotNormalForm(_))));
}
