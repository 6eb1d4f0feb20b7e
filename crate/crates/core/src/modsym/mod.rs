//! Weight-2 modular symbols for Γ₀(N).
//!
//! The space is presented by Manin symbols (c : d) ∈ P¹(Z/N) modulo
//! x + xS = 0 and x + xT + xT² = 0, computed over Q. The cuspidal part is the
//! kernel of the boundary map to the free space on cusp classes. Operators are
//! always returned as matrices on the cuspidal subspace, in the basis given by
//! [`ModularSymbolSpace::cuspidal_basis`].

pub mod cusps;
pub mod heilbronn;
pub mod p1;
pub mod sl2;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use thiserror::Error;

use crate::arith::{is_prime, ArithError, Level};
use crate::exactla::{kernel_from_rref, ExactMatrix, LinalgError, Rat};

pub use cusps::{cusp_equivalent, cusp_invariant, CuspClasses};
pub use p1::{P1Element, P1List, P1_RULE};
pub use sl2::Cusp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModsymError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{q} does not exactly divide {n}")]
    NotExactDivisor { n: u64, q: u64 },
    #[error("Atkin-Lehner index must be greater than 1")]
    TrivialKey,
    #[error("at least one Atkin-Lehner key is required")]
    EmptyKeys,
    #[error("key belongs to level {key}, space has level {space}")]
    LevelMismatch { key: u64, space: u64 },
    #[error("fixed subspace dimension is not even: {0}")]
    OddDimension(String),
}

/// An index Q > 1 with Q ‖ N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtkinLehnerKey {
    n: u64,
    q: u64,
}

impl AtkinLehnerKey {
    pub fn new(level: &Level, q: u64) -> Result<Self, ModsymError> {
        if q <= 1 {
            return Err(ModsymError::TrivialKey);
        }
        if !level.exactly_divides(q) {
            return Err(ModsymError::NotExactDivisor { n: level.n(), q });
        }
        Ok(AtkinLehnerKey { n: level.n(), q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn level(&self) -> u64 {
        self.n
    }
}

/// w_Q w_Q' = w_{QQ'/gcd(Q,Q')²}.
pub fn compose_indices(q1: u64, q2: u64) -> u64 {
    let g = q1.gcd(&q2);
    (q1 / g) * (q2 / g)
}

/// Indices of the group generated by `qs`, including 1, sorted.
pub fn close_group(qs: &[u64]) -> Vec<u64> {
    let mut group: BTreeSet<u64> = BTreeSet::from([1]);
    for &q in qs {
        let products: Vec<u64> = group.iter().map(|&g| compose_indices(g, q)).collect();
        group.extend(products);
    }
    group.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKey {
    Hecke(u64),
    AtkinLehner(u64),
}

pub fn p1_list(level: &Level) -> P1List {
    P1List::new(level.n())
}

#[derive(Debug)]
pub struct ModularSymbolSpace {
    level: Level,
    p1: P1List,
    /// Manin-symbol index of each free generator.
    generators: Vec<usize>,
    /// Every Manin symbol written in the generators.
    symbol_coords: Vec<Vec<(usize, Rat)>>,
    cusps: CuspClasses,
    /// Boundary of each generator as (cusp class, ±1).
    boundary_sparse: Vec<Vec<(usize, i64)>>,
    cuspidal_basis: ExactMatrix,
    /// Rows of `cuspidal_basis` that form an identity block.
    cuspidal_free_rows: Vec<usize>,
    cuspidal_vectors: Vec<Vec<(usize, Rat)>>,
    memo: Mutex<HashMap<OpKey, Arc<ExactMatrix>>>,
}

/// Build the space of weight-2 modular symbols of level N.
pub fn build_space(level: &Level) -> ModularSymbolSpace {
    ModularSymbolSpace::new(level)
}

impl ModularSymbolSpace {
    pub fn new(level: &Level) -> Self {
        let n = level.n();
        let p1 = P1List::new(n);
        let count = p1.len();
        let idx = |c: i64, d: i64| p1.index_of(c, d).expect("valid P1 element");

        // 2-term relations: x_i = sign · x_rep, or x_i = 0
        let mut two: Vec<Option<(usize, i64)>> = vec![None; count];
        let mut reps = Vec::new();
        let mut done = vec![false; count];
        for i in 0..count {
            if done[i] {
                continue;
            }
            let e = p1.get(i);
            let j = idx(e.d as i64, -(e.c as i64));
            done[i] = true;
            done[j] = true;
            if i == j {
                continue; // x = -x
            }
            let r = reps.len();
            reps.push(i);
            two[i] = Some((r, 1));
            two[j] = Some((r, -1));
        }

        // 3-term relations in terms of the representatives
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut seen = vec![false; count];
        for i in 0..count {
            if seen[i] {
                continue;
            }
            let e = p1.get(i);
            let (c, d) = (e.c as i64, e.d as i64);
            let j = idx(d, -c - d);
            let k = idx(-c - d, c);
            seen[i] = true;
            seen[j] = true;
            seen[k] = true;
            let mut row = vec![0i64; reps.len()];
            let mut any = false;
            for t in [i, j, k] {
                if let Some((r, s)) = two[t] {
                    row[r] += s;
                    any = true;
                }
            }
            if any && row.iter().any(|&v| v != 0) {
                rows.push(row);
            }
        }

        let rel = if rows.is_empty() {
            ExactMatrix::zeros(0, reps.len())
        } else {
            ExactMatrix::from_i64_rows(&rows)
        };
        let (echelon, pivots) = rel.rref();
        let mut is_pivot = vec![false; reps.len()];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..reps.len()).filter(|&r| !is_pivot[r]).collect();
        let mut gen_of_rep = vec![usize::MAX; reps.len()];
        for (g, &r) in free.iter().enumerate() {
            gen_of_rep[r] = g;
        }
        // representative coordinates
        let mut rep_coords: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); reps.len()];
        for &r in &free {
            rep_coords[r] = vec![(gen_of_rep[r], Rat::ONE)];
        }
        for (row, &p) in pivots.iter().enumerate() {
            rep_coords[p] = free
                .iter()
                .filter(|&&f| !echelon[(row, f)].is_zero())
                .map(|&f| (gen_of_rep[f], -&echelon[(row, f)]))
                .collect();
        }
        let symbol_coords: Vec<Vec<(usize, Rat)>> = two
            .iter()
            .map(|t| match t {
                None => Vec::new(),
                Some((r, 1)) => rep_coords[*r].clone(),
                Some((r, _)) => rep_coords[*r].iter().map(|(g, v)| (*g, -v)).collect(),
            })
            .collect();
        let generators: Vec<usize> = free.iter().map(|&r| reps[r]).collect();

        // boundary map
        let cusps = CuspClasses::new(n);
        let dim = generators.len();
        let boundary_sparse: Vec<Vec<(usize, i64)>> = generators
            .iter()
            .map(|&m| {
                let e = p1.get(m);
                let [a, b, c, d] = sl2::lift_to_sl2z(e.c, e.d, n);
                let to = cusps.class_of(Cusp::new(a, c));
                let from = cusps.class_of(Cusp::new(b, d));
                if to == from {
                    Vec::new()
                } else {
                    vec![(to, 1), (from, -1)]
                }
            })
            .collect();
        let mut boundary = ExactMatrix::zeros(cusps.len(), dim);
        for (j, col) in boundary_sparse.iter().enumerate() {
            for &(r, v) in col {
                boundary[(r, j)] = Rat::from_int(v);
            }
        }
        let (b_echelon, b_pivots) = boundary.rref();
        let cuspidal_basis = kernel_from_rref(&b_echelon, &b_pivots);
        let cuspidal_free_rows: Vec<usize> = (0..dim).filter(|c| !b_pivots.contains(c)).collect();
        let cuspidal_vectors = (0..cuspidal_basis.cols())
            .map(|k| {
                (0..dim)
                    .filter(|&j| !cuspidal_basis[(j, k)].is_zero())
                    .map(|j| (j, cuspidal_basis[(j, k)].clone()))
                    .collect()
            })
            .collect();

        ModularSymbolSpace {
            level: level.clone(),
            p1,
            generators,
            symbol_coords,
            cusps,
            boundary_sparse,
            cuspidal_basis,
            cuspidal_free_rows,
            cuspidal_vectors,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn p1(&self) -> &P1List {
        &self.p1
    }

    /// Dimension of the full space of modular symbols.
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn cuspidal_dimension(&self) -> usize {
        self.cuspidal_basis.cols()
    }

    pub fn cusp_classes(&self) -> &CuspClasses {
        &self.cusps
    }

    /// Manin-symbol indices of the free generators.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// ψ(N) × dim matrix: row i holds the coordinates of the i-th Manin symbol.
    pub fn quotient_basis(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.p1.len(), self.dimension());
        for (i, row) in self.symbol_coords.iter().enumerate() {
            for (g, v) in row {
                m[(i, *g)] = v.clone();
            }
        }
        m
    }

    /// Columns span the cuspidal subspace, in generator coordinates.
    pub fn cuspidal_basis(&self) -> &ExactMatrix {
        &self.cuspidal_basis
    }

    /// Matrix from the full space to the free space on cusp classes.
    pub fn boundary_map(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.cusps.len(), self.dimension());
        for (j, col) in self.boundary_sparse.iter().enumerate() {
            for &(r, v) in col {
                m[(r, j)] = Rat::from_int(v);
            }
        }
        m
    }

    /// Coordinates of the sum of the given integer Manin symbols.
    fn symbols_to_vector(&self, terms: &[(i64, i64, i64)]) -> Vec<Rat> {
        let mut counts: HashMap<usize, i64> = HashMap::new();
        for &(c, d, k) in terms {
            let i = self
                .p1
                .index_of(c, d)
                .expect("operator produced a symbol outside P1(Z/N)");
            *counts.entry(i).or_default() += k;
        }
        let mut out = vec![Rat::ZERO; self.dimension()];
        for (i, k) in counts {
            if k == 0 {
                continue;
            }
            let k = Rat::from_int(k);
            for (g, v) in &self.symbol_coords[i] {
                out[*g] += &(&k * v);
            }
        }
        out
    }

    /// Restriction to the cuspidal subspace of the operator sending the
    /// Manin symbol (c : d) to a sum of integer symbols.
    fn cuspidal_operator<F>(&self, image: F) -> Result<ExactMatrix, ModsymError>
    where
        F: Fn(P1Element) -> Vec<(i64, i64, i64)>,
    {
        let dim = self.dimension();
        let s = self.cuspidal_dimension();
        let mut images: Vec<Option<Vec<Rat>>> = vec![None; dim];
        let mut out = ExactMatrix::zeros(s, s);
        for (k, vector) in self.cuspidal_vectors.iter().enumerate() {
            let mut acc = vec![Rat::ZERO; dim];
            for (j, coef) in vector {
                let img = images[*j].get_or_insert_with(|| {
                    self.symbols_to_vector(&image(self.p1.get(self.generators[*j])))
                });
                for (g, v) in img.iter().enumerate() {
                    if !v.is_zero() {
                        acc[g] += &(coef * v);
                    }
                }
            }
            let mut bd = vec![Rat::ZERO; self.cusps.len()];
            for (j, v) in acc.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                for &(r, sgn) in &self.boundary_sparse[j] {
                    if sgn > 0 {
                        bd[r] += v;
                    } else {
                        bd[r] -= v;
                    }
                }
            }
            if bd.iter().any(|v| !v.is_zero()) {
                return Err(LinalgError::NonInvariantSubspace.into());
            }
            for (row, &f) in self.cuspidal_free_rows.iter().enumerate() {
                out[(row, k)] = acc[f].clone();
            }
        }
        Ok(out)
    }

    fn memoized<F>(&self, key: OpKey, compute: F) -> Result<Arc<ExactMatrix>, ModsymError>
    where
        F: FnOnce() -> Result<ExactMatrix, ModsymError>,
    {
        if let Some(m) = self.memo.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(compute()?);
        self.memo.lock().unwrap().entry(key).or_insert_with(|| m.clone());
        Ok(m)
    }

    /// Operators computed so far, for the on-disk cache.
    pub fn memoized_operators(&self) -> Vec<(OpKey, Arc<ExactMatrix>)> {
        let mut v: Vec<_> = self
            .memo
            .lock()
            .unwrap()
            .iter()
            .map(|(k, m)| (*k, m.clone()))
            .collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    /// Seed the operator memo, e.g. from the cache. Dimensions must match.
    pub fn insert_operator(&self, key: OpKey, m: ExactMatrix) -> Result<(), ModsymError> {
        let s = self.cuspidal_dimension();
        if m.rows() != s || m.cols() != s {
            return Err(LinalgError::DimensionMismatch(format!(
                "cached operator is {}x{}, cuspidal dimension is {s}",
                m.rows(),
                m.cols()
            ))
            .into());
        }
        self.memo.lock().unwrap().insert(key, Arc::new(m));
        Ok(())
    }

    /// T_p on the cuspidal subspace, for a prime p not dividing N.
    pub fn hecke_matrix(&self, p: u64) -> Result<Arc<ExactMatrix>, ModsymError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p).into());
        }
        if self.level.is_divisible_by(p) {
            return Err(ArithError::BadReduction {
                n: self.level.n(),
                p,
            }
            .into());
        }
        self.memoized(OpKey::Hecke(p), || self.hecke_unchecked(p))
    }

    /// T_n via Heilbronn matrices; n must be coprime to N.
    fn hecke_unchecked(&self, n: u64) -> Result<ExactMatrix, ModsymError> {
        let hs = heilbronn::merel(n);
        self.cuspidal_operator(|e| {
            let (c, d) = (e.c as i64, e.d as i64);
            hs.iter()
                .map(|[a, b, cc, dd]| (c * a + d * cc, c * b + d * dd, 1))
                .collect()
        })
    }

    /// T_{p²} on the cuspidal subspace, for a prime p not dividing N.
    pub fn hecke_matrix_p2(&self, p: u64) -> Result<Arc<ExactMatrix>, ModsymError> {
        self.hecke_matrix(p)?;
        self.memoized(OpKey::Hecke(p * p), || self.hecke_unchecked(p * p))
    }

    /// w_Q on the cuspidal subspace.
    pub fn atkin_lehner_matrix(&self, key: &AtkinLehnerKey) -> Result<Arc<ExactMatrix>, ModsymError> {
        if key.n != self.level.n() {
            return Err(ModsymError::LevelMismatch {
                key: key.n,
                space: self.level.n(),
            });
        }
        self.memoized(OpKey::AtkinLehner(key.q), || self.atkin_lehner_unchecked(key.q))
    }

    fn atkin_lehner_unchecked(&self, q: u64) -> Result<ExactMatrix, ModsymError> {
        let n = self.level.n();
        let w = sl2::atkin_lehner_matrix(n, q);
        self.cuspidal_operator(|e| {
            let [a, b, c, d] = sl2::lift_to_sl2z(e.c, e.d, n);
            let alpha = Cusp::new(b, d).act(&w);
            let beta = Cusp::new(a, c).act(&w);
            sl2::symbol_between(alpha, beta)
                .into_iter()
                .map(|(c, d, s)| (c, d, s as i64))
                .collect()
        })
    }

    fn key_group(&self, keys: &[AtkinLehnerKey]) -> Result<Vec<AtkinLehnerKey>, ModsymError> {
        if keys.is_empty() {
            return Err(ModsymError::EmptyKeys);
        }
        for k in keys {
            if k.n != self.level.n() {
                return Err(ModsymError::LevelMismatch {
                    key: k.n,
                    space: self.level.n(),
                });
            }
        }
        let qs: Vec<u64> = keys.iter().map(|k| k.q).collect();
        close_group(&qs)
            .into_iter()
            .filter(|&q| q > 1)
            .map(|q| AtkinLehnerKey::new(&self.level, q))
            .collect()
    }

    /// Basis (in cuspidal coordinates) of the common +1-eigenspace of the
    /// group generated by `keys`.
    pub fn fixed_cuspidal_subspace(&self, keys: &[AtkinLehnerKey]) -> Result<ExactMatrix, ModsymError> {
        let group = self.key_group(keys)?;
        let s = self.cuspidal_dimension();
        let id = ExactMatrix::identity(s);
        let mut stacked = ExactMatrix::zeros(0, s);
        for k in &group {
            let w = self.atkin_lehner_matrix(k)?;
            stacked = stacked.vstack(&w.sub(&id)?)?;
        }
        let basis = stacked.kernel_basis();
        if basis.cols() % 2 != 0 {
            return Err(ModsymError::OddDimension(format!(
                "N = {}, keys {:?}",
                self.level.n(),
                keys.iter().map(|k| k.q).collect::<Vec<_>>()
            )));
        }
        Ok(basis)
    }

    /// Genus of X₀(N)/G from the averaged trace (1/|G|)·Σ tr(w) = dim S^G.
    pub fn quotient_genus(&self, keys: &[AtkinLehnerKey]) -> Result<u64, ModsymError> {
        let group = self.key_group(keys)?;
        let mut total = Rat::from_int(self.cuspidal_dimension() as i64);
        for k in &group {
            total += &self.atkin_lehner_matrix(k)?.trace()?;
        }
        let dim = &total / &Rat::from_int(group.len() as i64 + 1);
        match dim.to_i64() {
            Some(d) if d >= 0 && d % 2 == 0 => Ok(d as u64 / 2),
            _ => Err(ModsymError::OddDimension(format!(
                "N = {}, averaged trace {dim}",
                self.level.n()
            ))),
        }
    }

    /// (tr(T_p | S^G), tr(T_p² | S^G)) computed by averaging over G.
    /// An empty key list means the trivial group.
    pub fn fixed_hecke_traces(&self, keys: &[AtkinLehnerKey], p: u64) -> Result<(Rat, Rat), ModsymError> {
        let group = if keys.is_empty() {
            Vec::new()
        } else {
            self.key_group(keys)?
        };
        let t = self.hecke_matrix(p)?;
        let t2 = self.hecke_matrix_p2(p)?;
        let s = self.cuspidal_dimension() as i64;
        // T_p² = T_{p²} + p on weight 2 forms of level prime to p
        let mut sum1 = t.trace()?;
        let mut sum2 = t2.trace()?;
        let mut dim_sum = Rat::from_int(s);
        for k in &group {
            let w = self.atkin_lehner_matrix(k)?;
            sum1 += &trace_of_product(&t, &w);
            sum2 += &trace_of_product(&t2, &w);
            dim_sum += &w.trace()?;
        }
        let order = Rat::from_int(group.len() as i64 + 1);
        let dim = &dim_sum / &order;
        let t1 = &sum1 / &order;
        let tp2 = &(&sum2 / &order) + &(&Rat::from_int(p as i64) * &dim);
        Ok((t1, tp2))
    }
}

/// tr(AB) for square matrices of equal size.
pub fn trace_of_product(a: &ExactMatrix, b: &ExactMatrix) -> Rat {
    let n = a.rows();
    let mut acc = Rat::ZERO;
    for i in 0..n {
        let row = a.row(i);
        for (k, v) in row.iter().enumerate() {
            if !v.is_zero() {
                let w = &b[(k, i)];
                if !w.is_zero() {
                    acc += &(v * w);
                }
            }
        }
    }
    acc
}

/// Genus of X₀(N)/⟨w_Q : Q ∈ qs⟩.
pub fn quotient_genus(level: &Level, qs: &[u64]) -> Result<u64, ModsymError> {
    let keys = qs
        .iter()
        .map(|&q| AtkinLehnerKey::new(level, q))
        .collect::<Result<Vec<_>, _>>()?;
    build_space(level).quotient_genus(&keys)
}
