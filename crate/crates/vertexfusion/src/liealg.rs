//! Finite-dimensional semisimple Lie algebras with a fixed invariant form,
//! their finite-dimensional highest-weight modules, and dual-basis data.
//!
//! sl_n is realized on traceless matrices with the trace form, which gives
//! the highest root squared length 2 and dual Coxeter number n. Arbitrary
//! algebras can be supplied as structure-constant tables and are validated
//! against antisymmetry, Jacobi, invariance and nondegeneracy.

use crate::error::{Error, Result};
use crate::linalg::{SparseMat, SparseVec};
use crate::scalar::Scalar;
use serde::Deserialize;
use std::collections::BTreeMap;

/// Simple-root data available for the sl_n realization.
#[derive(Debug, Clone)]
pub struct ChevalleyData {
    pub rank: usize,
    /// Basis indices of the simple raising generators e_i = E_{i,i+1}.
    pub e: Vec<usize>,
    /// Basis indices of the simple lowering generators f_i = E_{i+1,i}.
    pub f: Vec<usize>,
    /// Basis indices of the coroots h_i = E_{ii} - E_{i+1,i+1}.
    pub h: Vec<usize>,
    /// Cartan matrix entries a[i][j] = alpha_j(h_i).
    pub cartan: Vec<Vec<i64>>,
}

/// A Lie algebra given by structure constants and an invariant form.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub dim: usize,
    pub labels: Vec<String>,
    /// brackets[i][j] = [x_i, x_j] as a coefficient vector.
    pub brackets: Vec<Vec<SparseVec>>,
    /// Invariant symmetric form B[i][j] = (x_i, x_j).
    pub form: SparseMat,
    /// Dual Coxeter number under the normalization (theta, theta) = 2.
    pub dual_coxeter: Scalar,
    pub chevalley: Option<ChevalleyData>,
}

impl LieAlgebra {
    /// [a, b] by bilinear extension of the structure constants.
    pub fn bracket(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, ca) in &a.entries {
            for (j, cb) in &b.entries {
                out.add_scaled(&self.brackets[*i][*j], &(ca.clone() * cb.clone()));
            }
        }
        out
    }

    /// (a, b) under the invariant form.
    pub fn pair(&self, a: &SparseVec, b: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, ca) in &a.entries {
            for (j, cb) in &b.entries {
                let v = self.form.get(*i, *j);
                if !v.is_zero() {
                    acc += ca.clone() * cb.clone() * v;
                }
            }
        }
        acc
    }

    /// Form evaluated on basis elements.
    pub fn pair_basis(&self, i: usize, j: usize) -> Scalar {
        self.form.get(i, j)
    }

    /// Dual bases (u_i), (u^i) with (u_i, u^j) = delta_ij: u_i is the given
    /// basis and u^j the rows of the inverse Gram matrix.
    pub fn dual_bases(&self) -> Result<(Vec<SparseVec>, Vec<SparseVec>)> {
        let inv = self.form.inverse().map_err(|_| Error::SingularMatrix)?;
        let primal = (0..self.dim).map(SparseVec::unit).collect();
        let dual = (0..self.dim).map(|j| inv.rows[j].clone()).collect();
        Ok((primal, dual))
    }

    /// Validates all structural invariants; names the violated one.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                // antisymmetry
                let mut s = self.brackets[i][j].clone();
                s.add_scaled(&self.brackets[j][i], &Scalar::one());
                if !s.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "antisymmetry fails at basis pair ({i},{j})"
                    )));
                }
                // form symmetry
                if self.form.get(i, j) != self.form.get(j, i) {
                    return Err(Error::InvalidInput("form is not symmetric".into()));
                }
            }
        }
        // Jacobi identity
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut s = self.bracket(&self.brackets[i][j], &SparseVec::unit(k));
                    s.add_scaled(
                        &self.bracket(&self.brackets[j][k], &SparseVec::unit(i)),
                        &Scalar::one(),
                    );
                    s.add_scaled(
                        &self.bracket(&self.brackets[k][i], &SparseVec::unit(j)),
                        &Scalar::one(),
                    );
                    if !s.is_zero() {
                        return Err(Error::InvalidInput(format!(
                            "Jacobi identity fails at basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        // invariance ([a,b],c) = (a,[b,c])
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.pair(&self.brackets[i][j], &SparseVec::unit(k));
                    let rhs = self.pair(&SparseVec::unit(i), &self.brackets[j][k]);
                    if lhs != rhs {
                        return Err(Error::InvalidInput(format!(
                            "form invariance fails at basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        if self.form.inverse().is_err() {
            return Err(Error::InvalidInput("form is degenerate".into()));
        }
        Ok(())
    }

    /// Casimir action sum_i ad(u_i) ad(u^i) in the adjoint representation.
    /// Scalar 2h on a simple algebra normalized to (theta, theta) = 2.
    pub fn casimir_adjoint(&self) -> Result<SparseMat> {
        let (primal, dual) = self.dual_bases()?;
        let ad = |x: &SparseVec| -> SparseMat {
            let mut m = SparseMat::zero(self.dim, self.dim);
            for j in 0..self.dim {
                let col = self.bracket(x, &SparseVec::unit(j));
                for (r, v) in &col.entries {
                    m.rows[*r].set(j, v.clone());
                }
            }
            m
        };
        let mut acc = SparseMat::zero(self.dim, self.dim);
        for i in 0..self.dim {
            acc = acc.add(&ad(&primal[i]).mat_mul(&ad(&dual[i])));
        }
        Ok(acc)
    }
}

/// Traceless matrices of size n with the trace form.
///
/// Basis order: strictly upper elementary matrices E_{ij} (i < j, row-major),
/// then the coroots H_i, then strictly lower E_{ij} (i > j, row-major).
pub fn build_sl(n: usize) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(Error::InvalidInput("sl_n needs n >= 2".into()));
    }
    // basis as sparse n x n matrices: list of (row, col, coeff)
    let mut basis: Vec<Vec<(usize, usize, Scalar)>> = Vec::new();
    let mut labels = Vec::new();
    let mut upper_index = BTreeMap::new();
    let mut lower_index = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i < j {
                upper_index.insert((i, j), basis.len());
                labels.push(format!("e{}{}", i + 1, j + 1));
                basis.push(vec![(i, j, Scalar::one())]);
            }
        }
    }
    let h_start = basis.len();
    for i in 0..n - 1 {
        labels.push(format!("h{}", i + 1));
        basis.push(vec![
            (i, i, Scalar::one()),
            (i + 1, i + 1, Scalar::from_int(-1)),
        ]);
    }
    for i in 0..n {
        for j in 0..n {
            if i > j {
                lower_index.insert((i, j), basis.len());
                labels.push(format!("f{}{}", j + 1, i + 1));
                basis.push(vec![(i, j, Scalar::one())]);
            }
        }
    }
    let dim = basis.len();

    let mat_of = |v: &[(usize, usize, Scalar)]| -> Vec<Vec<Scalar>> {
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for (r, c, s) in v {
            m[*r][*c] = s.clone();
        }
        m
    };
    let dense: Vec<Vec<Vec<Scalar>>> = basis.iter().map(|b| mat_of(b)).collect();

    // expresses a traceless matrix in the basis
    let coords = |m: &[Vec<Scalar>]| -> SparseVec {
        let mut v = SparseVec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let c = m[i][j].clone();
                if c.is_zero() {
                    continue;
                }
                let idx = if i < j {
                    upper_index[&(i, j)]
                } else {
                    lower_index[&(i, j)]
                };
                v.set(idx, c);
            }
        }
        // diagonal part: partial sums give the H-coordinates
        let mut partial = Scalar::zero();
        for i in 0..n - 1 {
            partial += m[i][i].clone();
            if !partial.is_zero() {
                v.set(h_start + i, partial.clone());
            }
        }
        v
    };

    let mul = |a: &[Vec<Scalar>], b: &[Vec<Scalar>]| -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out[i][j].clone() + a[i][k].clone() * b[k][j].clone();
                    out[i][j] = v;
                }
            }
        }
        out
    };
    let trace = |a: &[Vec<Scalar>]| -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..n {
            t += a[i][i].clone();
        }
        t
    };

    let mut brackets = vec![vec![SparseVec::new(); dim]; dim];
    let mut form = SparseMat::zero(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let ab = mul(&dense[i], &dense[j]);
            let ba = mul(&dense[j], &dense[i]);
            let mut comm = vec![vec![Scalar::zero(); n]; n];
            for r in 0..n {
                for c in 0..n {
                    comm[r][c] = ab[r][c].clone() - ba[r][c].clone();
                }
            }
            brackets[i][j] = coords(&comm);
            let t = trace(&ab);
            if !t.is_zero() {
                form.rows[i].set(j, t);
            }
        }
    }

    let rank = n - 1;
    let chevalley = ChevalleyData {
        rank,
        e: (0..rank).map(|i| upper_index[&(i, i + 1)]).collect(),
        f: (0..rank).map(|i| lower_index[&(i + 1, i)]).collect(),
        h: (0..rank).map(|i| h_start + i).collect(),
        cartan: (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        if i == j {
                            2
                        } else if i.abs_diff(j) == 1 {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect(),
    };

    let g = LieAlgebra {
        dim,
        labels,
        brackets,
        form,
        dual_coxeter: Scalar::from_int(n as i64),
        chevalley: Some(chevalley),
    };
    g.validate()?;
    Ok(g)
}

/// A finite-dimensional module with explicit action matrices per basis
/// element of the algebra.
#[derive(Debug, Clone)]
pub struct WeightModule {
    pub dim: usize,
    /// action[i] is the matrix of the i-th algebra basis element.
    pub action: Vec<SparseMat>,
    /// Highest weight in fundamental-weight coordinates, when constructed
    /// as an irreducible.
    pub highest_weight: Option<Vec<i64>>,
}

impl WeightModule {
    pub fn trivial(g: &LieAlgebra) -> Self {
        WeightModule {
            dim: 1,
            action: vec![SparseMat::zero(1, 1); g.dim],
            highest_weight: Some(vec![0; g.chevalley.as_ref().map_or(0, |c| c.rank)]),
        }
    }

    pub fn direct_sum(&self, other: &WeightModule) -> WeightModule {
        let dim = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = SparseMat::zero(dim, dim);
                for (r, row) in a.rows.iter().enumerate() {
                    for (c, v) in &row.entries {
                        m.rows[r].set(*c, v.clone());
                    }
                }
                for (r, row) in b.rows.iter().enumerate() {
                    for (c, v) in &row.entries {
                        m.rows[self.dim + r].set(self.dim + c, v.clone());
                    }
                }
                m
            })
            .collect();
        WeightModule {
            dim,
            action,
            highest_weight: None,
        }
    }

    /// Checks the representation property on all basis pairs.
    pub fn verify_representation(&self, g: &LieAlgebra) -> bool {
        for i in 0..g.dim {
            for j in 0..g.dim {
                let lhs = {
                    let mut m = SparseMat::zero(self.dim, self.dim);
                    for (k, c) in &g.brackets[i][j].entries {
                        m = m.add(&self.action[*k].scale(c));
                    }
                    m
                };
                let rhs = self.action[i]
                    .mat_mul(&self.action[j])
                    .sub(&self.action[j].mat_mul(&self.action[i]));
                if !lhs.sub(&rhs).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The adjoint module of g on itself.
    pub fn adjoint(g: &LieAlgebra) -> WeightModule {
        let action = (0..g.dim)
            .map(|i| {
                let mut m = SparseMat::zero(g.dim, g.dim);
                for j in 0..g.dim {
                    for (r, v) in &g.brackets[i][j].entries {
                        m.rows[*r].set(j, v.clone());
                    }
                }
                m
            })
            .collect();
        WeightModule {
            dim: g.dim,
            action,
            highest_weight: None,
        }
    }
}

/// Internal: vectors in the lowering-word spanning set at a fixed depth.
type WordCombo = BTreeMap<Vec<u8>, Scalar>;

struct HwBuilder<'a> {
    ch: &'a ChevalleyData,
    lambda: Vec<i64>,
}

impl<'a> HwBuilder<'a> {
    fn weight_of(&self, w: &[u8]) -> Vec<i64> {
        let mut mu = self.lambda.clone();
        for &j in w {
            for i in 0..self.ch.rank {
                mu[i] -= self.ch.cartan[i][j as usize];
            }
        }
        mu
    }

    /// e_i applied to a word, as a combo of shorter words:
    /// e_i f_j = f_j e_i + delta_ij h_i.
    fn raise(&self, i: usize, w: &[u8]) -> WordCombo {
        let mut out = WordCombo::new();
        if w.is_empty() {
            return out;
        }
        let j = w[0] as usize;
        let rest = &w[1..];
        for (u, c) in self.raise(i, rest) {
            let mut word = vec![j as u8];
            word.extend_from_slice(&u);
            add_combo(&mut out, word, c);
        }
        if i == j {
            let mu = self.weight_of(rest);
            let c = Scalar::from_int(mu[i]);
            if !c.is_zero() {
                add_combo(&mut out, rest.to_vec(), c);
            }
        }
        out
    }

    fn raise_combo(&self, i: usize, combo: &WordCombo) -> WordCombo {
        let mut out = WordCombo::new();
        for (w, c) in combo {
            for (u, d) in self.raise(i, w) {
                add_combo(&mut out, u, c.clone() * d);
            }
        }
        out
    }

    /// Contravariant pairing <v_w, combo> at equal depth.
    fn pairing(&self, w: &[u8], combo: &WordCombo) -> Scalar {
        if w.is_empty() {
            return combo.get(&vec![]).cloned().unwrap_or_else(Scalar::zero);
        }
        let raised = self.raise_combo(w[0] as usize, combo);
        self.pairing(&w[1..], &raised)
    }
}

fn add_combo(combo: &mut WordCombo, w: Vec<u8>, c: Scalar) {
    let v = combo.remove(&w).unwrap_or_else(Scalar::zero) + c;
    if !v.is_zero() {
        combo.insert(w, v);
    }
}

/// The finite-dimensional irreducible highest-weight module for a dominant
/// integral weight, built from lowering words modulo the radical of the
/// contravariant form.
pub fn highest_weight_module(g: &LieAlgebra, lambda: &[i64]) -> Result<WeightModule> {
    let ch = g
        .chevalley
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("no simple-root data for this algebra".into()))?;
    if lambda.len() != ch.rank {
        return Err(Error::InvalidInput(format!(
            "weight length {} does not match rank {}",
            lambda.len(),
            ch.rank
        )));
    }
    if lambda.iter().any(|&c| c < 0) {
        return Err(Error::InvalidInput(
            "weight is not dominant integral".into(),
        ));
    }
    let b = HwBuilder {
        ch,
        lambda: lambda.to_vec(),
    };

    // depth-by-depth basis words and inverse Gram matrices
    let mut layers: Vec<Vec<Vec<u8>>> = vec![vec![vec![]]];
    let mut grams_inv: Vec<SparseMat> = vec![SparseMat::identity(1)];
    loop {
        let prev = layers.last().unwrap();
        let mut candidates: Vec<Vec<u8>> = Vec::new();
        for w in prev {
            for i in 0..ch.rank {
                let mut word = vec![i as u8];
                word.extend_from_slice(w);
                candidates.push(word);
            }
        }
        candidates.sort();
        candidates.dedup();
        if candidates.is_empty() {
            break;
        }
        let m = candidates.len();
        let mut gram = SparseMat::zero(m, m);
        for r in 0..m {
            for c in 0..m {
                let mut combo = WordCombo::new();
                combo.insert(candidates[c].clone(), Scalar::one());
                let v = b.pairing(&candidates[r], &combo);
                if !v.is_zero() {
                    gram.rows[r].set(c, v);
                }
            }
        }
        // pivot columns of the Gram form an independent set in the quotient
        let pivots = {
            let mut g2 = gram.clone();
            g2.rref()
        };
        if pivots.is_empty() {
            break;
        }
        let chosen: Vec<Vec<u8>> = pivots.iter().map(|&c| candidates[c].clone()).collect();
        let k = chosen.len();
        let mut small = SparseMat::zero(k, k);
        for r in 0..k {
            for c in 0..k {
                let v = gram.get(pivots[r], pivots[c]);
                if !v.is_zero() {
                    small.rows[r].set(c, v);
                }
            }
        }
        grams_inv.push(small.inverse().map_err(|_| Error::SingularMatrix)?);
        layers.push(chosen);
    }

    // global indexing: depth-major
    let mut offsets = vec![0usize];
    for layer in &layers {
        offsets.push(offsets.last().unwrap() + layer.len());
    }
    let dim = *offsets.last().unwrap();

    // coordinates of a word combo in the chosen basis of its depth
    let coords_at = |depth: usize, combo: &WordCombo| -> SparseVec {
        let basis = &layers[depth];
        let ginv = &grams_inv[depth];
        let mut rhs = SparseVec::new();
        for (r, bw) in basis.iter().enumerate() {
            let v = b.pairing(bw, combo);
            if !v.is_zero() {
                rhs.set(r, v);
            }
        }
        ginv.apply(&rhs)
    };

    let mut simple_e = vec![SparseMat::zero(dim, dim); ch.rank];
    let mut simple_f = vec![SparseMat::zero(dim, dim); ch.rank];
    let mut simple_h = vec![SparseMat::zero(dim, dim); ch.rank];
    for (depth, layer) in layers.iter().enumerate() {
        for (c, w) in layer.iter().enumerate() {
            let col = offsets[depth] + c;
            let mu = b.weight_of(w);
            for i in 0..ch.rank {
                if mu[i] != 0 {
                    simple_h[i].rows[col].set(col, Scalar::from_int(mu[i]));
                }
            }
            for i in 0..ch.rank {
                if depth + 1 < layers.len() {
                    let mut word = vec![i as u8];
                    word.extend_from_slice(w);
                    let mut combo = WordCombo::new();
                    combo.insert(word, Scalar::one());
                    let x = coords_at(depth + 1, &combo);
                    for (r, v) in &x.entries {
                        simple_f[i].rows[offsets[depth + 1] + r].set(col, v.clone());
                    }
                }
                if depth > 0 {
                    let mut combo = WordCombo::new();
                    combo.insert(w.clone(), Scalar::one());
                    let raised = b.raise_combo(i, &combo);
                    if !raised.is_empty() {
                        let x = coords_at(depth - 1, &raised);
                        for (r, v) in &x.entries {
                            simple_e[i].rows[offsets[depth - 1] + r].set(col, v.clone());
                        }
                    }
                }
            }
        }
    }

    // extend from simple generators to the full basis through single-term
    // bracket relations [x_i, x_j] = c x_k
    let mut action: Vec<Option<SparseMat>> = vec![None; g.dim];
    for i in 0..ch.rank {
        action[ch.e[i]] = Some(simple_e[i].clone());
        action[ch.f[i]] = Some(simple_f[i].clone());
        action[ch.h[i]] = Some(simple_h[i].clone());
    }
    let mut progress = true;
    while progress {
        progress = false;
        for i in 0..g.dim {
            for j in 0..g.dim {
                let (Some(a), Some(bb)) = (&action[i], &action[j]) else {
                    continue;
                };
                let br = &g.brackets[i][j];
                if br.entries.len() != 1 {
                    continue;
                }
                let (&k, c) = br.entries.iter().next().unwrap();
                if action[k].is_some() {
                    continue;
                }
                let comm = a.mat_mul(bb).sub(&bb.mat_mul(a));
                let cinv = c.inv().expect("structure constant nonzero");
                action[k] = Some(comm.scale(&cinv));
                progress = true;
            }
        }
    }
    let action: Vec<SparseMat> = action
        .into_iter()
        .map(|a| {
            a.ok_or_else(|| {
                Error::InvalidInput("basis not generated by simple elements".into())
            })
        })
        .collect::<Result<_>>()?;

    Ok(WeightModule {
        dim,
        action,
        highest_weight: Some(lambda.to_vec()),
    })
}

/// JSON structure-constant table format.
#[derive(Debug, Deserialize)]
pub struct AlgebraTable {
    pub dimension: usize,
    pub labels: Vec<String>,
    /// Entries [i, j, k, "p/q"]: coefficient of x_k in [x_i, x_j].
    pub brackets: Vec<(usize, usize, usize, String)>,
    /// Entries [i, j, "p/q"]: the form (x_i, x_j).
    pub form: Vec<(usize, usize, String)>,
    /// Dual Coxeter number "p/q"; computed from the adjoint Casimir when
    /// absent.
    #[serde(default)]
    pub dual_coxeter: Option<String>,
}

/// Loads and fully validates a user-supplied structure-constant table.
pub fn algebra_from_table(json: &str) -> Result<LieAlgebra> {
    let table: AlgebraTable =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("bad table: {e}")))?;
    let n = table.dimension;
    if table.labels.len() != n {
        return Err(Error::InvalidInput("label count != dimension".into()));
    }
    let mut brackets = vec![vec![SparseVec::new(); n]; n];
    for (i, j, k, v) in &table.brackets {
        if *i >= n || *j >= n || *k >= n {
            return Err(Error::InvalidInput("bracket index out of range".into()));
        }
        brackets[*i][*j].set(*k, Scalar::parse_rational(v)?);
    }
    let mut form = SparseMat::zero(n, n);
    for (i, j, v) in &table.form {
        if *i >= n || *j >= n {
            return Err(Error::InvalidInput("form index out of range".into()));
        }
        form.rows[*i].set(*j, Scalar::parse_rational(v)?);
    }
    let mut g = LieAlgebra {
        dim: n,
        labels: table.labels,
        brackets,
        form,
        dual_coxeter: Scalar::zero(),
        chevalley: None,
    };
    g.validate()?;
    g.dual_coxeter = match table.dual_coxeter {
        Some(h) => Scalar::parse_rational(&h)?,
        None => {
            let cas = g.casimir_adjoint()?;
            let c = cas.get(0, 0);
            let scalar_matrix = SparseMat::identity(n).scale(&c);
            if !cas.sub(&scalar_matrix).is_zero() {
                return Err(Error::InvalidInput(
                    "adjoint Casimir is not scalar; supply dual_coxeter explicitly".into(),
                ));
            }
            c.div(&Scalar::from_int(2))?
        }
    };
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Root-data oracle for sl_n: h = 1 + <rho, theta^vee>, and theta is the
    /// sum of all simple roots so the pairing is n-1.
    fn dual_coxeter_oracle(n: usize) -> i64 {
        1 + (n as i64 - 1)
    }

    /// Weyl dimension formula oracle for sl_n.
    fn weyl_dim_oracle(n: usize, lambda: &[i64]) -> i64 {
        let mut num = 1i64;
        let mut den = 1i64;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let mut a = 0i64;
                let mut b = 0i64;
                for k in i..j {
                    a += lambda[k] + 1;
                    b += 1;
                }
                num *= a;
                den *= b;
            }
        }
        num / den
    }

    #[test]
    fn sl2_structure() {
        let g = build_sl(2).unwrap();
        assert_eq!(g.dim, 3);
        assert_eq!(g.dual_coxeter, Scalar::from_int(dual_coxeter_oracle(2)));
        // basis order: e, h, f
        let e = SparseVec::unit(0);
        let h = SparseVec::unit(1);
        let f = SparseVec::unit(2);
        assert_eq!(g.bracket(&e, &f), h);
        let mut two_e = SparseVec::new();
        two_e.set(0, Scalar::from_int(2));
        assert_eq!(g.bracket(&h, &e), two_e);
        assert!(g.bracket(&h, &h).is_zero());
        assert_eq!(g.pair(&e, &f), Scalar::one());
        assert_eq!(g.pair(&h, &h), Scalar::from_int(2));
    }

    #[test]
    fn sl3_structure() {
        let g = build_sl(3).unwrap();
        assert_eq!(g.dim, 8);
        assert_eq!(g.dual_coxeter, Scalar::from_int(dual_coxeter_oracle(3)));
        assert!(build_sl(1).is_err());
    }

    #[test]
    fn casimir_on_adjoint_gives_dual_coxeter() {
        for n in [2usize, 3] {
            let g = build_sl(n).unwrap();
            let cas = g.casimir_adjoint().unwrap();
            let expected =
                SparseMat::identity(g.dim).scale(&(g.dual_coxeter.clone() * Scalar::from_int(2)));
            assert!(cas.sub(&expected).is_zero(), "Casimir != 2h for sl_{n}");
        }
    }

    #[test]
    fn dual_bases_gram_condition() {
        for n in [2usize, 3] {
            let g = build_sl(n).unwrap();
            let (primal, dual) = g.dual_bases().unwrap();
            for i in 0..g.dim {
                for j in 0..g.dim {
                    let expect = if i == j { Scalar::one() } else { Scalar::zero() };
                    assert_eq!(g.pair(&primal[i], &dual[j]), expect);
                }
            }
        }
    }

    #[test]
    fn sl2_dual_basis_is_f_halfh_e() {
        let g = build_sl(2).unwrap();
        let (_, dual) = g.dual_bases().unwrap();
        assert_eq!(dual[0], SparseVec::unit(2));
        let mut half_h = SparseVec::new();
        half_h.set(1, Scalar::from_ratio(1, 2));
        assert_eq!(dual[1], half_h);
        assert_eq!(dual[2], SparseVec::unit(0));
    }

    #[test]
    fn highest_weight_modules_small() {
        let g2 = build_sl(2).unwrap();
        let triv = highest_weight_module(&g2, &[0]).unwrap();
        assert_eq!(triv.dim, 1);
        let fund = highest_weight_module(&g2, &[1]).unwrap();
        assert_eq!(fund.dim, weyl_dim_oracle(2, &[1]) as usize);
        assert!(fund.verify_representation(&g2));
        let adj = highest_weight_module(&g2, &[2]).unwrap();
        assert_eq!(adj.dim, weyl_dim_oracle(2, &[2]) as usize);
        assert!(adj.verify_representation(&g2));

        let g3 = build_sl(3).unwrap();
        let v3 = highest_weight_module(&g3, &[1, 0]).unwrap();
        assert_eq!(v3.dim, weyl_dim_oracle(3, &[1, 0]) as usize);
        assert!(v3.verify_representation(&g3));

        assert!(highest_weight_module(&g2, &[-1]).is_err());
    }

    #[test]
    fn sl2_casimir_on_fundamental() {
        // Casimir sum u_i u^i acts as 3/2 on the 2-dimensional module
        let g = build_sl(2).unwrap();
        let m = highest_weight_module(&g, &[1]).unwrap();
        let (primal, dual) = g.dual_bases().unwrap();
        let act = |v: &SparseVec| -> SparseMat {
            let mut acc = SparseMat::zero(m.dim, m.dim);
            for (i, c) in &v.entries {
                acc = acc.add(&m.action[*i].scale(c));
            }
            acc
        };
        let mut cas = SparseMat::zero(m.dim, m.dim);
        for i in 0..g.dim {
            cas = cas.add(&act(&primal[i]).mat_mul(&act(&dual[i])));
        }
        let expected = SparseMat::identity(m.dim).scale(&Scalar::from_ratio(3, 2));
        assert!(cas.sub(&expected).is_zero());
    }

    #[test]
    fn adjoint_module_matches_structure() {
        let g = build_sl(2).unwrap();
        let adj = WeightModule::adjoint(&g);
        assert!(adj.verify_representation(&g));
    }

    #[test]
    fn table_round_trip_sl2() {
        let json = r#"{
            "dimension": 3,
            "labels": ["e", "h", "f"],
            "brackets": [
                [0, 2, 1, "1"], [2, 0, 1, "-1"],
                [1, 0, 0, "2"], [0, 1, 0, "-2"],
                [1, 2, 2, "-2"], [2, 1, 2, "2"]
            ],
            "form": [[0, 2, "1"], [2, 0, "1"], [1, 1, "2"]]
        }"#;
        let g = algebra_from_table(json).unwrap();
        assert_eq!(g.dual_coxeter, Scalar::from_int(2));

        let bad = r#"{
            "dimension": 2,
            "labels": ["a", "b"],
            "brackets": [[0, 1, 0, "1"]],
            "form": [[0, 0, "1"], [1, 1, "1"]]
        }"#;
        assert!(algebra_from_table(bad).is_err());
    }
}
