//! k-series coefficients, h-operators, and Drinfeld polynomials.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::algebra::GeneratorSymbol;
use crate::linalg::SpMat;
use crate::root_data::Vertex;
use crate::scalar::{Field, Rat, Scalar};

use super::{unique_highest_weight, DrinfeldData, ModuleRealization, Provenance};

#[derive(Clone, Debug)]
pub enum SeriesError {
    /// Requested order exceeds the realization's series data.
    ModeUnavailable(GeneratorSymbol),
    /// The highest-weight line is missing or not unique.
    NoHighestWeightLine { found: usize },
    /// The highest-weight vector is not an eigenvector of a k-mode.
    NotKEigenvector(Vertex),
    /// The eigenvalue series does not match the rational-function ansatz.
    AnsatzMismatch(Vertex),
    /// The highest weight fails dominance at this node.
    NotDominant(Vertex),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::ModeUnavailable(g) => write!(f, "series data missing for {g}"),
            SeriesError::NoHighestWeightLine { found } => {
                write!(f, "expected a unique highest-weight line, found {found}")
            }
            SeriesError::NotKEigenvector(i) => {
                write!(f, "highest-weight vector is not a k-eigenvector at node {i}")
            }
            SeriesError::AnsatzMismatch(i) => write!(
                f,
                "k-eigenvalue series at node {i} does not match q^d P(q z)/P(q^{{-1}} z)"
            ),
            SeriesError::NotDominant(i) => {
                write!(f, "highest weight has negative pairing at node {i}")
            }
        }
    }
}

/// The operator coefficients of `k^+_i(z)` and `k^-_i(z)` up to a mode
/// order: `plus[r] = k^+_{i,r}`, `minus[r] = k^-_{i,-r}`.
#[derive(Clone, Debug)]
pub struct KSeries {
    pub vertex: Vertex,
    pub plus: Vec<SpMat>,
    pub minus: Vec<SpMat>,
}

/// Coefficients of `k^{+-}_i(z)` to the requested order.
pub fn k_series(m: &ModuleRealization, i: Vertex, order: usize) -> Result<KSeries, SeriesError> {
    let mut plus = Vec::with_capacity(order + 1);
    let mut minus = Vec::with_capacity(order + 1);
    for r in 0..=order as i64 {
        plus.push(
            m.act(GeneratorSymbol::KPlusMode(i, r))
                .map_err(|_| SeriesError::ModeUnavailable(GeneratorSymbol::KPlusMode(i, r)))?,
        );
        minus.push(
            m.act(GeneratorSymbol::KMinusMode(i, -r))
                .map_err(|_| SeriesError::ModeUnavailable(GeneratorSymbol::KMinusMode(i, -r)))?,
        );
    }
    Ok(KSeries {
        vertex: i,
        plus,
        minus,
    })
}

/// The operators `h_{i,+-s}` for `1 <= s <= s_max`, extracted by the exact
/// logarithm of `k_i^{-+1} k^{+-}_i(z)` divided by `+-(q - q^{-1})`.
#[derive(Clone, Debug)]
pub struct HOperators {
    pub vertex: Vertex,
    /// `plus[s-1] = h_{i,s}`.
    pub plus: Vec<SpMat>,
    /// `minus[s-1] = h_{i,-s}`.
    pub minus: Vec<SpMat>,
}

pub fn h_operators(
    m: &ModuleRealization,
    i: Vertex,
    s_max: usize,
) -> Result<HOperators, SeriesError> {
    let field = m.field().clone();
    let series = k_series(m, i, s_max)?;
    if s_max == 0 {
        return Ok(HOperators {
            vertex: i,
            plus: Vec::new(),
            minus: Vec::new(),
        });
    }
    let k_inv = &series.minus[0]; // k_i^{-1} = k^-_{i,0}
    let k = &series.plus[0];
    // N(z) = k_i^{-1} k^+_i(z) - 1 has no constant term; its s-th
    // coefficient is k_i^{-1} k^+_{i,s}.
    let n_plus: Vec<SpMat> = (1..=s_max).map(|s| k_inv.mul(&series.plus[s])).collect();
    let n_minus: Vec<SpMat> = (1..=s_max).map(|s| k.mul(&series.minus[s])).collect();
    let qmq_inv = field.q_minus_qinv().inverse().expect("invertible");
    let log_plus = series_log(&n_plus, m.dimension(), &field);
    let log_minus = series_log(&n_minus, m.dimension(), &field);
    Ok(HOperators {
        vertex: i,
        plus: log_plus.iter().map(|l| l.scale(&qmq_inv)).collect(),
        minus: log_minus.iter().map(|l| l.scale(&(-&qmq_inv))).collect(),
    })
}

/// Coefficients of `log(1 + N)` where `N` has coefficients `n[0], n[1], ...`
/// at orders `1, 2, ...` (all coefficients commute in our use, but the
/// formula below is valid regardless).
fn series_log(n: &[SpMat], dim: usize, field: &Field) -> Vec<SpMat> {
    let order = n.len();
    let mut result: Vec<SpMat> = vec![SpMat::zero(dim, dim); order];
    // Powers N^j truncated at `order`.
    let mut power: Vec<SpMat> = n.to_vec();
    for j in 1..=order {
        let coeff = field.from_rat(if j % 2 == 1 {
            Rat::from_frac(1, j as i64)
        } else {
            Rat::from_frac(-1, j as i64)
        });
        for s in j..=order {
            result[s - 1] = result[s - 1].add(&power[s - 1].scale(&coeff));
        }
        if j < order {
            power = convolve(&power, n, dim);
        }
    }
    result
}

/// Coefficients of `exp(H)` (orders `1..=order`, constant term handled by
/// the caller) for a series `H` with coefficients `h[0], h[1], ...` at
/// orders `1, 2, ...`.
pub fn series_exp(h: &[SpMat], dim: usize, field: &Field) -> Vec<SpMat> {
    let order = h.len();
    let mut result: Vec<SpMat> = vec![SpMat::zero(dim, dim); order];
    let mut power: Vec<SpMat> = h.to_vec();
    let mut factorial = Rat::one();
    for j in 1..=order {
        factorial = &factorial * &Rat::from_int(j as i64);
        let coeff = field.from_rat(Rat::one() / factorial.clone());
        for s in j..=order {
            result[s - 1] = result[s - 1].add(&power[s - 1].scale(&coeff));
        }
        if j < order {
            power = convolve(&power, h, dim);
        }
    }
    result
}

/// Cauchy product of two series with coefficients at orders `1, 2, ...`.
fn convolve(a: &[SpMat], b: &[SpMat], dim: usize) -> Vec<SpMat> {
    let order = a.len();
    let mut out = vec![SpMat::zero(dim, dim); order];
    for s in 2..=order {
        for t in 1..s {
            out[s - 1] = out[s - 1].add(&a[t - 1].mul(&b[s - t - 1]));
        }
    }
    out
}

/// A dense polynomial in the spectral variable `z` with scalar
/// coefficients, low degree first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZPoly {
    coeffs: Vec<Scalar>,
}

impl ZPoly {
    pub fn one(field: &Field) -> Self {
        ZPoly {
            coeffs: vec![field.one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        let mut p = ZPoly { coeffs };
        p.trim();
        p
    }

    /// `z - root`.
    pub fn linear(field: &Field, root: &Scalar) -> Self {
        ZPoly {
            coeffs: vec![-root, field.one()],
        }
    }

    fn trim(&mut self) {
        while self
            .coeffs
            .last()
            .map(|c| c.is_zero() && self.coeffs.len() > 1)
            .unwrap_or(false)
        {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Option<&Scalar> {
        self.coeffs.get(k)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn mul(&self, other: &ZPoly, field: &Field) -> ZPoly {
        let mut coeffs = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in other.coeffs.iter().enumerate() {
                coeffs[a + b] += &(ca * cb);
            }
        }
        ZPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.degree() > 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "z")?,
                1 => write!(f, "({c})*z")?,
                _ if c.is_one() => write!(f, "z^{k}")?,
                _ => write!(f, "({c})*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The Drinfeld polynomials of a realization: one monic polynomial per
/// finite node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DrinfeldPolynomialSet {
    polys: Vec<ZPoly>,
}

impl DrinfeldPolynomialSet {
    /// The polynomial at node `j` (1-based).
    pub fn at(&self, j: Vertex) -> &ZPoly {
        &self.polys[j - 1]
    }

    pub fn polys(&self) -> &[ZPoly] {
        &self.polys
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .polys
            .iter()
            .enumerate()
            .map(|(idx, p)| format!("P_{} = {}", idx + 1, p))
            .collect();
        parts.join(", ")
    }
}

/// Eigenvalue series of `k^+_j(z)` on the highest-weight line, to the given
/// order. For realizations with mode data the matrices are applied
/// directly; tensor products multiply their factors' series (the
/// highest-weight eigenvalue is multiplicative, the module-level shadow of
/// the triangular coproduct expansion).
fn hw_eigenvalue_series(
    m: &ModuleRealization,
    j: Vertex,
    order: usize,
) -> Result<Vec<Scalar>, SeriesError> {
    match (m.drinfeld_data(), m.provenance()) {
        (DrinfeldData::None, Provenance::Tensor { left, right, .. }) => {
            let a = hw_eigenvalue_series(left, j, order)?;
            let b = hw_eigenvalue_series(right, j, order)?;
            let field = m.field();
            let mut out = vec![field.zero(); order + 1];
            for s in 0..=order {
                for t in 0..=s {
                    out[s] += &(&a[t] * &b[s - t]);
                }
            }
            Ok(out)
        }
        _ => {
            let hw = unique_highest_weight(m).ok_or(SeriesError::NoHighestWeightLine {
                found: super::highest_weight_vectors(m).len(),
            })?;
            let v = &hw.vector;
            let (anchor, anchor_coeff) = v.iter().next().expect("nonzero vector");
            let anchor_inv = anchor_coeff.inverse().expect("nonzero coefficient");
            let mut out = Vec::with_capacity(order + 1);
            for r in 0..=order as i64 {
                let sym = GeneratorSymbol::KPlusMode(j, r);
                let mat = m.act(sym).map_err(|_| SeriesError::ModeUnavailable(sym))?;
                let image = mat.apply(v);
                let theta = image
                    .get(anchor)
                    .map(|c| c * &anchor_inv)
                    .unwrap_or_else(|| m.field().zero());
                if image != v.scale(&theta) {
                    return Err(SeriesError::NotKEigenvector(j));
                }
                out.push(theta);
            }
            Ok(out)
        }
    }
}

/// Reads the Drinfeld polynomials off the highest-weight eigenvalues of the
/// k-series.
///
/// Convention (fixed so that the fundamental evaluation module
/// `V(omega_k)_alpha` yields exactly `P_j(z) = (z - zeta^{-1}
/// alpha)^{delta_jk}`): the eigenvalue of `k^+_j(z)` on the highest-weight
/// line is the `z = infinity` expansion of
///
/// ```text
///   q^{-deg P_j} P_j(q z) / P_j(q^{-1} z)
/// ```
///
/// with `P_j` monic of degree `(alpha_j | lambda)`. The fit is exact and
/// over-determined; any leftover mismatch is reported.
pub fn drinfeld_polynomials(
    m: &ModuleRealization,
) -> Result<DrinfeldPolynomialSet, SeriesError> {
    let field = m.field().clone();
    let hw = unique_highest_weight(m).ok_or_else(|| SeriesError::NoHighestWeightLine {
        found: super::highest_weight_vectors(m).len(),
    })?;
    if !hw.killed_by_all_xplus {
        return Err(SeriesError::NoHighestWeightLine { found: 0 });
    }
    let lambda = hw.weight.clone().ok_or(SeriesError::NoHighestWeightLine { found: 1 })?;

    let n = m.diagram().rank();
    let mut polys = Vec::with_capacity(n);
    for j in 1..=n {
        let d = lambda.coord(j);
        if d < 0 {
            return Err(SeriesError::NotDominant(j));
        }
        let d = d as usize;
        let order = 2 * d + 2;
        let theta = hw_eigenvalue_series(m, j, order)?;

        // Solve q^{-d} P(q z) = theta(z) P(q^{-1} z) coefficient-wise for
        // the monic P of degree d, then validate every remaining order.
        let mut p = vec![field.zero(); d + 1];
        p[d] = field.one();
        for k in (0..d).rev() {
            // p_k (q^{k-d} - q^{d-k}) = sum_{m=1}^{d-k} p_{k+m} q^{-(k+m)} theta_m
            let mut rhs = field.zero();
            for mm in 1..=(d - k) {
                rhs += &(&(&p[k + mm] * &field.q_pow(-((k + mm) as i64))) * &theta[mm]);
            }
            let denom = &field.q_pow(k as i64 - d as i64) - &field.q_pow(d as i64 - k as i64);
            p[k] = &rhs / &denom;
        }
        // Validation over all available orders, including the ones beyond
        // the solved window.
        for k in (d as i64 - order as i64)..=(d as i64) {
            let lhs = if (0..=d as i64).contains(&k) {
                &p[k as usize] * &field.q_pow(k - d as i64)
            } else {
                field.zero()
            };
            let mut rhs = field.zero();
            for mm in 0..=order {
                let l = k + mm as i64;
                if (0..=d as i64).contains(&l) {
                    rhs += &(&(&p[l as usize] * &field.q_pow(-l)) * &theta[mm]);
                }
            }
            if lhs != rhs {
                return Err(SeriesError::AnsatzMismatch(j));
            }
        }
        polys.push(ZPoly::from_coeffs(p));
    }
    Ok(DrinfeldPolynomialSet { polys })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmod::{evaluation_module, tensor, trivial_module, Coproduct};
    use crate::root_data::DynkinDiagram;

    fn zeta() -> Rat {
        Rat::from_int(2)
    }

    #[test]
    fn k_series_mode_zero_is_cartan() {
        let d = DynkinDiagram::type_a(2);
        let m = evaluation_module(&d, 1, &Rat::from_int(3), &zeta()).unwrap();
        let s = k_series(&m, 1, 3).unwrap();
        assert_eq!(s.plus[0], m.act(GeneratorSymbol::K(1, 1)).unwrap());
        assert_eq!(s.minus[0], m.act(GeneratorSymbol::K(1, -1)).unwrap());
        // k^+_{1,0} k^-_{1,0} = 1.
        assert!(s.plus[0].mul(&s.minus[0]).is_identity());
    }

    #[test]
    fn trivial_module_series() {
        let d = DynkinDiagram::type_a(1);
        let f = Field::specialized(zeta()).unwrap();
        let t = trivial_module(&d, &f);
        let s = k_series(&t, 1, 4).unwrap();
        assert!(s.plus[0].is_identity());
        for r in 1..=4 {
            assert!(s.plus[r].is_zero());
            assert!(s.minus[r].is_zero());
        }
        let h = h_operators(&t, 1, 3).unwrap();
        assert!(h.plus.iter().all(|m| m.is_zero()));
        assert!(h.minus.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn h_exponentiates_back() {
        let d = DynkinDiagram::type_a(1);
        let m = evaluation_module(&d, 1, &Rat::from_frac(5, 2), &zeta()).unwrap();
        let s_max = 4;
        let h = h_operators(&m, 1, s_max).unwrap();
        assert_eq!(h.plus.len(), s_max);
        let series = k_series(&m, 1, s_max).unwrap();
        let field = m.field().clone();
        // exp(+(q - q^{-1}) sum h_s z^{-s}), then multiply by k.
        let qmq = field.q_minus_qinv();
        let scaled: Vec<SpMat> = h.plus.iter().map(|hm| hm.scale(&qmq)).collect();
        let exp = series_exp(&scaled, m.dimension(), &field);
        for s in 1..=s_max {
            let reconstructed = series.plus[0].mul(&exp[s - 1]);
            assert_eq!(reconstructed, series.plus[s], "k^+ coefficient {s}");
        }
        // Same on the minus side with the opposite sign.
        let scaled: Vec<SpMat> = h.minus.iter().map(|hm| hm.scale(&(-&qmq))).collect();
        let exp = series_exp(&scaled, m.dimension(), &field);
        for s in 1..=s_max {
            let reconstructed = series.minus[0].mul(&exp[s - 1]);
            assert_eq!(reconstructed, series.minus[s], "k^- coefficient {s}");
        }
        // s_max = 0 gives empty lists.
        let h0 = h_operators(&m, 1, 0).unwrap();
        assert!(h0.plus.is_empty() && h0.minus.is_empty());
    }

    #[test]
    fn fundamental_drinfeld_polynomials() {
        // V(omega_k)_alpha has P_j(z) = (z - zeta^{-1} alpha)^{delta_jk}.
        let zeta = zeta();
        for (rank, node) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let d = DynkinDiagram::type_a(rank);
            let alpha = Rat::from_frac(5, 2);
            let m = evaluation_module(&d, node, &alpha, &zeta).unwrap();
            let ps = drinfeld_polynomials(&m).unwrap();
            let field = m.field();
            for j in 1..=rank {
                let p = ps.at(j);
                assert!(p.is_monic());
                if j == node {
                    let root = field.from_rat(&alpha * &zeta.recip());
                    assert_eq!(p, &ZPoly::linear(field, &root), "node {node} rank {rank}");
                } else {
                    assert_eq!(p, &ZPoly::one(field));
                }
            }
        }
    }

    #[test]
    fn trivial_drinfeld_polynomials() {
        let d = DynkinDiagram::type_a(2);
        let f = Field::specialized(zeta()).unwrap();
        let t = trivial_module(&d, &f);
        let ps = drinfeld_polynomials(&t).unwrap();
        for j in 1..=2 {
            assert_eq!(ps.at(j), &ZPoly::one(&f));
        }
    }

    #[test]
    fn tensor_drinfeld_polynomials_multiply() {
        let d = DynkinDiagram::type_a(1);
        let zeta = zeta();
        let m1 = evaluation_module(&d, 1, &Rat::from_int(3), &zeta).unwrap();
        let m2 = evaluation_module(&d, 1, &Rat::from_int(1), &zeta).unwrap();
        let t = tensor(&m1, &m2, Coproduct::Circ).unwrap();
        let pt = drinfeld_polynomials(&t).unwrap();
        let p1 = drinfeld_polynomials(&m1).unwrap();
        let p2 = drinfeld_polynomials(&m2).unwrap();
        let field = t.field();
        assert_eq!(pt.at(1), &p1.at(1).mul(p2.at(1), field));
        assert_eq!(pt.at(1).degree(), 2);
    }
}
