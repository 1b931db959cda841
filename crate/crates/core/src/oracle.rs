//! Smith normal form ground truth: Betti numbers, invariant factors and
//! torsion witnesses from the boundary matrices, plus the rho-AT-model of a
//! complex whose differentials are already diagonal.

use std::collections::{BTreeMap, BTreeSet};
use std::mem;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::atmodel::LambdaATModel;
use crate::chain::{Chain, GeneratorId, GradedMap};
use crate::coeff::{factorize, CoefficientSpec};
use crate::complex::{require_valid, ChainComplex};
use crate::error::{Error, Result};

/// Complexes above this many cells are outside the oracle's default scope.
pub const DEFAULT_CELL_CAP: usize = 2000;

pub fn within_cap(cc: &ChainComplex, cap: usize) -> bool {
    cc.total_size() <= cap
}

/// A sparse integer matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, BigInt>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn from_dense<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntegerMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        m
    }

    /// Matrix of `d_q`: rows index `C_{q-1}`, columns index `C_q`.
    pub fn boundary(cc: &ChainComplex, q: usize) -> Self {
        let rows = if q == 0 { 0 } else { cc.size(q - 1) };
        let mut m = IntegerMatrix::zeros(rows, cc.size(q));
        if q == 0 {
            return m;
        }
        for (j, col) in cc.boundary_columns(q).into_iter().enumerate() {
            for (i, v) in col {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.data[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `out[i][j] = self[row_perm[i]][col_perm[j]]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut inv_col = vec![0; self.cols];
        for (j, &c) in col_perm.iter().enumerate() {
            inv_col[c] = j;
        }
        let mut out = IntegerMatrix::zeros(self.rows, self.cols);
        for (i, &r) in row_perm.iter().enumerate() {
            for (&c, v) in &self.data[r] {
                out.data[i].insert(inv_col[c], v.clone());
            }
        }
        out
    }
}

/// Invariant factors `d_1 | d_2 | …` padded with zeros to `min(rows, cols)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SNFResult {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SNFResult {
    /// Diagonal entries greater than one.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| **d > BigInt::one()).cloned().collect()
    }
}

/// Puts a list of nonzero diagonal entries into divisibility-chain form by
/// repeated `(a, b) → (gcd, lcm)`.
fn normalize_diagonal(mut entries: Vec<BigInt>, len: usize) -> SNFResult {
    for e in entries.iter_mut() {
        *e = e.abs();
    }
    let rank = entries.len();
    let mut ones = entries.iter().filter(|e| e.is_one()).count();
    let mut rest: Vec<BigInt> = entries.into_iter().filter(|e| !e.is_one()).collect();
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            if !(&rest[j] % &rest[i]).is_zero() {
                let g = rest[i].gcd(&rest[j]);
                let l = rest[i].lcm(&rest[j]);
                rest[i] = g;
                rest[j] = l;
            }
        }
    }
    rest.sort();
    let extra_ones = rest.iter().filter(|e| e.is_one()).count();
    ones += extra_ones;
    let mut diagonal: Vec<BigInt> = vec![BigInt::one(); ones];
    diagonal.extend(rest.into_iter().filter(|e| !e.is_one()));
    diagonal.resize(len.max(rank), BigInt::zero());
    SNFResult { diagonal, rank }
}

struct SparseElim {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
    row_alive: Vec<bool>,
}

impl SparseElim {
    fn new(m: &IntegerMatrix) -> Self {
        let mut cols = vec![BTreeSet::new(); m.cols];
        for (i, r) in m.data.iter().enumerate() {
            for &j in r.keys() {
                cols[j].insert(i);
            }
        }
        SparseElim {
            rows: m.data.clone(),
            cols,
            row_alive: vec![true; m.rows],
        }
    }

    /// `row_i := row_i − q · row_p`.
    fn row_sub(&mut self, i: usize, q: &BigInt, p: usize) {
        let src: Vec<(usize, BigInt)> = self.rows[p].iter().map(|(&j, v)| (j, v.clone())).collect();
        for (j, v) in src {
            let e = self.rows[i].entry(j).or_insert_with(BigInt::zero);
            *e -= q * v;
            if e.is_zero() {
                self.rows[i].remove(&j);
                self.cols[j].remove(&i);
            } else {
                self.cols[j].insert(i);
            }
        }
    }

    fn remove(&mut self, p: usize, j: usize) {
        let row = mem::take(&mut self.rows[p]);
        for &k in row.keys() {
            self.cols[k].remove(&p);
        }
        self.row_alive[p] = false;
        debug_assert!(self.cols[j].is_empty());
    }

    /// One sweep of unit pivots, column by column. Returns pivots taken.
    fn unit_sweep(&mut self) -> usize {
        let mut taken = 0;
        for j in 0..self.cols.len() {
            let pick = self.cols[j]
                .iter()
                .filter(|&&i| self.rows[i][&j].magnitude().is_one())
                .min_by_key(|&&i| (self.rows[i].len(), i))
                .copied();
            let Some(p) = pick else { continue };
            let u = self.rows[p][&j].clone();
            let others: Vec<usize> = self.cols[j].iter().copied().filter(|&i| i != p).collect();
            for i in others {
                let q = &self.rows[i][&j] * &u;
                self.row_sub(i, &q, p);
            }
            self.remove(p, j);
            taken += 1;
        }
        taken
    }

    /// Smallest remaining entry by absolute value, as `(row, col)`.
    fn smallest(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &BigInt)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            if !self.row_alive[i] {
                continue;
            }
            for (&j, v) in r {
                if best.is_none_or(|(_, _, b)| v.magnitude() < b.magnitude()) {
                    best = Some((i, j, v));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Isolates a general pivot by Euclidean row and column reduction and
    /// returns its value.
    fn isolate(&mut self, mut p: usize, mut j: usize) -> BigInt {
        loop {
            let a = self.rows[p][&j].clone();
            let others: Vec<usize> = self.cols[j].iter().copied().filter(|&i| i != p).collect();
            for i in &others {
                let q = self.rows[*i][&j].div_floor(&a);
                self.row_sub(*i, &q, p);
            }
            if let Some(&i) = self.cols[j]
                .iter()
                .filter(|&&i| i != p)
                .min_by(|&&x, &&y| self.rows[x][&j].magnitude().cmp(self.rows[y][&j].magnitude()))
            {
                p = i;
                continue;
            }
            // Column j now holds only the pivot, so column operations touch row p alone.
            let entries: Vec<(usize, BigInt)> = self.rows[p]
                .iter()
                .filter(|(&k, _)| k != j)
                .map(|(&k, v)| (k, v.clone()))
                .collect();
            let mut next: Option<(usize, BigInt)> = None;
            for (k, v) in entries {
                let r = v.mod_floor(&a);
                if r.is_zero() {
                    self.rows[p].remove(&k);
                    self.cols[k].remove(&p);
                } else {
                    if next.as_ref().is_none_or(|(_, b)| r.magnitude() < b.magnitude()) {
                        next = Some((k, r.clone()));
                    }
                    self.rows[p].insert(k, r);
                }
            }
            match next {
                Some((k, _)) => j = k,
                None => {
                    self.remove(p, j);
                    return a;
                }
            }
        }
    }
}

/// Invariant factors by sparse integer elimination: unit pivots first, then
/// Euclidean reduction on smallest entries, then divisibility repair.
pub fn smith_normal_form(m: &IntegerMatrix) -> SNFResult {
    let mut e = SparseElim::new(m);
    let mut diag = Vec::new();
    loop {
        let n = e.unit_sweep();
        diag.extend(std::iter::repeat_n(BigInt::one(), n));
        if n == 0 {
            break;
        }
    }
    while let Some((p, j)) = e.smallest() {
        diag.push(e.isolate(p, j));
        loop {
            let n = e.unit_sweep();
            diag.extend(std::iter::repeat_n(BigInt::one(), n));
            if n == 0 {
                break;
            }
        }
    }
    normalize_diagonal(diag, m.rows.min(m.cols))
}

/// `U · M · V = D` with `U`, `V` unimodular; `u_inv = U⁻¹` is tracked so
/// columns of `D`'s preimage can be read off directly.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub u: Vec<Vec<BigInt>>,
    pub u_inv: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub result: SNFResult,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

struct Dense {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Dense {
    /// `row_i := row_i − q · row_t`
    fn row_sub(&mut self, i: usize, q: &BigInt, t: usize) {
        if q.is_zero() {
            return;
        }
        for mat in [&mut self.a, &mut self.u] {
            let src = mat[t].clone();
            for (x, s) in mat[i].iter_mut().zip(src) {
                *x -= q * s;
            }
        }
        for row in self.u_inv.iter_mut() {
            let add = q * &row[i];
            row[t] += add;
        }
    }

    /// `col_k := col_k − q · col_t`
    fn col_sub(&mut self, k: usize, q: &BigInt, t: usize) {
        if q.is_zero() {
            return;
        }
        for mat in [&mut self.a, &mut self.v] {
            for row in mat.iter_mut() {
                let s = q * &row[t];
                row[k] -= s;
            }
        }
    }

    fn swap_rows(&mut self, i: usize, t: usize) {
        if i == t {
            return;
        }
        self.a.swap(i, t);
        self.u.swap(i, t);
        for row in self.u_inv.iter_mut() {
            row.swap(i, t);
        }
    }

    fn swap_cols(&mut self, k: usize, t: usize) {
        if k == t {
            return;
        }
        for mat in [&mut self.a, &mut self.v] {
            for row in mat.iter_mut() {
                row.swap(k, t);
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for mat in [&mut self.a, &mut self.u] {
            for x in mat[t].iter_mut() {
                *x = -mem::take(x);
            }
        }
        for row in self.u_inv.iter_mut() {
            row[t] = -mem::take(&mut row[t]);
        }
    }
}

/// Dense Smith normal form with transforms.
pub fn smith_normal_form_with_transforms(m: &IntegerMatrix) -> SnfDecomposition {
    let (r, c) = (m.rows, m.cols);
    let mut s = Dense {
        a: m.to_dense(),
        u: identity(r),
        u_inv: identity(r),
        v: identity(c),
    };
    let mut rank = 0;
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &s.a[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.magnitude() < s.a[bi][bj].magnitude()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = best else { break };
            s.swap_rows(i, t);
            s.swap_cols(j, t);
            let pivot = s.a[t][t].clone();
            for i in t + 1..r {
                let q = s.a[i][t].div_floor(&pivot);
                s.row_sub(i, &q, t);
            }
            for k in t + 1..c {
                let q = s.a[t][k].div_floor(&pivot);
                s.col_sub(k, &q, t);
            }
            let dirty = (t + 1..r).any(|i| !s.a[i][t].is_zero()) || (t + 1..c).any(|k| !s.a[t][k].is_zero());
            if dirty {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|k| !(&s.a[i][k] % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    // row_t += row_i, then reduce again
                    s.row_sub(t, &-BigInt::one(), i);
                }
                None => break,
            }
        }
        if s.a[t][t].is_zero() {
            break;
        }
        if s.a[t][t].is_negative() {
            s.negate_row(t);
        }
        rank += 1;
    }
    let mut diagonal: Vec<BigInt> = (0..r.min(c)).map(|t| s.a[t][t].clone()).collect();
    diagonal.iter_mut().skip(rank).for_each(|d| *d = BigInt::zero());
    SnfDecomposition {
        result: SNFResult { diagonal, rank },
        u: s.u,
        u_inv: s.u_inv,
        v: s.v,
        d: s.a,
    }
}

/// Free rank and invariant factors (> 1) of every `H_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleHomology {
    pub betti: Vec<usize>,
    pub factors: Vec<Vec<BigInt>>,
}

impl OracleHomology {
    /// Invariant factors of `H_q` split into prime powers `(p, t)`.
    pub fn prime_powers(&self, q: usize) -> Vec<(BigInt, u32)> {
        let mut out: Vec<(BigInt, u32)> = self.factors[q].iter().flat_map(factorize).collect();
        out.sort();
        out
    }

    /// For every prime, the number of prime-power factors in each dimension.
    pub fn torsion_counts(&self) -> BTreeMap<BigInt, Vec<usize>> {
        let mut out: BTreeMap<BigInt, Vec<usize>> = BTreeMap::new();
        for q in 0..self.factors.len() {
            for (p, _) in self.prime_powers(q) {
                out.entry(p).or_insert_with(|| vec![0; self.factors.len()])[q] += 1;
            }
        }
        out
    }

    pub fn torsion_primes(&self) -> BTreeSet<BigInt> {
        self.torsion_counts().into_keys().collect()
    }
}

/// `β_q = |C_q| − rank D_q − rank D_{q+1}`; torsion of `H_q` from the
/// nontrivial diagonal of `SNF(D_{q+1})`.
pub fn homology_via_snf(cc: &ChainComplex) -> Result<OracleHomology> {
    require_valid(cc)?;
    if *cc.coeffs() != CoefficientSpec::Integers {
        return Err(Error::CoefficientMismatch {
            expected: CoefficientSpec::Integers.to_string(),
            found: cc.coeffs().to_string(),
        });
    }
    let n = cc.num_levels();
    let snfs: Vec<SNFResult> = (0..=n)
        .map(|q| smith_normal_form(&IntegerMatrix::boundary(cc, q)))
        .collect();
    let betti = (0..n)
        .map(|q| cc.size(q) - snfs[q].rank - snfs[q + 1].rank)
        .collect();
    let factors = (0..n).map(|q| snfs[q + 1].nontrivial_factors()).collect();
    Ok(OracleHomology { betti, factors })
}

/// A pair with `d(b) = μ a`, where no `ρ a` with `0 < ρ < μ` is a boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionWitness {
    pub a: Chain,
    pub b: Chain,
    pub mu: BigInt,
}

/// One witness per invariant factor `μ > 1`, read off the transforms of
/// `SNF(D_{q+1})`.
pub fn torsion_witnesses(cc: &ChainComplex) -> Result<Vec<TorsionWitness>> {
    require_valid(cc)?;
    let z = CoefficientSpec::Integers;
    let mut out = Vec::new();
    for q in 0..cc.num_levels().saturating_sub(1) {
        let snf = smith_normal_form_with_transforms(&IntegerMatrix::boundary(cc, q + 1));
        for (t, mu) in snf.result.diagonal.iter().enumerate() {
            if *mu <= BigInt::one() {
                continue;
            }
            let a = Chain::from_terms(q, snf.u_inv.iter().enumerate().map(|(i, row)| (i, row[t].clone())), &z);
            let b = Chain::from_terms(q + 1, snf.v.iter().enumerate().map(|(j, row)| (j, row[t].clone())), &z);
            out.push(TorsionWitness { a, b, mu: mu.clone() });
        }
    }
    Ok(out)
}

/// The rho-AT-model of a complex whose differential matrices are diagonal
/// (`d(x_i) = μ_i y_i` with `μ_i > 0`), `ρ` being the lcm of all `μ_i`.
pub fn rho_at_model(cc: &Arc<ChainComplex>) -> Result<LambdaATModel> {
    require_valid(cc)?;
    let z = CoefficientSpec::Integers;
    if *cc.coeffs() != z {
        return Err(Error::CoefficientMismatch {
            expected: z.to_string(),
            found: cc.coeffs().to_string(),
        });
    }
    let mut rho = BigInt::one();
    // pairs[q]: x in C_q with d(x) = μ y, keyed by index i (y = (q-1, i))
    let mut mu_of: BTreeMap<GeneratorId, BigInt> = BTreeMap::new();
    for (x, img) in cc.differential().iter() {
        match img.terms() {
            [(i, mu)] if *i == x.index && mu.is_positive() => {
                rho = rho.lcm(mu);
                mu_of.insert(x, mu.clone());
            }
            _ => {
                return Err(Error::NotNormalForm(format!(
                    "d({x}) is not a positive multiple of c{}[{}]",
                    x.dim.saturating_sub(1),
                    x.index
                )))
            }
        }
    }
    let mut f = GradedMap::new(0);
    let mut g = GradedMap::new(0);
    let mut phi = GradedMap::new(1);
    let mut h = vec![Vec::new(); cc.num_levels()];
    for id in cc.all_generators() {
        let is_source = mu_of.contains_key(&id);
        let above = GeneratorId::new(id.dim + 1, id.index);
        let target_of = mu_of.get(&above);
        match (is_source, target_of) {
            (true, _) => {}
            (false, Some(mu)) => {
                let coef = &rho / mu;
                phi.insert_unchecked(id, Chain::from_terms(id.dim + 1, [(id.index, coef)], &z));
            }
            (false, None) => {
                h[id.dim].push(id.index);
                f.insert_unchecked(id, Chain::generator(id));
                g.insert_unchecked(id, Chain::generator(id).scaled(&rho, &z));
            }
        }
    }
    Ok(LambdaATModel {
        complex: Arc::clone(cc),
        h,
        f,
        g,
        phi,
        lambda: rho,
        pivot_count: 0,
    })
}
