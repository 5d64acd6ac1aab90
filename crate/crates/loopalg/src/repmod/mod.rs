//! Concrete finite-dimensional module realizations.
//!
//! A [`ModuleRealization`] stores a weight-graded basis together with exact
//! sparse action matrices for the Kac-Moody generators `e_i, f_i, k_i^{+-1}`
//! over `I + {0}`, and — when the module is an evaluation module — a closed
//! form for every Drinfeld-generator mode. Tensor products carry Kac-Moody
//! actions only: the paper's coproduct is given on the Kac-Moody generators,
//! and those generate the whole algebra.

mod evaluation;
mod series;

pub use evaluation::{evaluation_module, trivial_module};
pub use series::{
    drinfeld_polynomials, h_operators, k_series, DrinfeldPolynomialSet, HOperators, KSeries,
    ZPoly,
};

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::format;
use core::fmt;

use crate::algebra::{coproduct_bullet, coproduct_circ, GeneratorSymbol, TensorExpression};
use crate::linalg::{nullspace, SpMat, SpVec};
use crate::root_data::{pairing, DynkinDiagram, RootVector, Vertex, Weight};
use crate::scalar::{Field, Rat, Scalar};

/// Which coproduct defines a tensor-product action.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Coproduct {
    /// `Delta(e_i) = e_i (x) 1 + k_i (x) e_i`.
    Circ,
    /// The opposite coproduct.
    Bullet,
}

impl fmt::Display for Coproduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coproduct::Circ => write!(f, "circ"),
            Coproduct::Bullet => write!(f, "bullet"),
        }
    }
}

/// One evaluation factor: node `k`, base parameter `alpha`, shift `tau`,
/// giving the spectral parameter `alpha * zeta^tau`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectralFactor {
    pub node: Vertex,
    pub alpha: Rat,
    pub tau_shift: i64,
}

/// Where a realization came from; used to route computations that need more
/// than the stored matrices (Drinfeld polynomials of tensor products).
#[derive(Clone, Debug)]
pub enum Provenance {
    Evaluation,
    Trivial,
    Tensor {
        coproduct: Coproduct,
        left: Box<ModuleRealization>,
        right: Box<ModuleRealization>,
    },
    Dual(Box<ModuleRealization>),
    Custom,
}

/// Drinfeld-generator data of a realization.
#[derive(Clone, Debug)]
pub enum DrinfeldData {
    /// Mode-closed form: `x^{+-}_{i,r} = a_i^r x^{+-}_{i,0}` and
    /// `k^+_{i,m} = (q - q^{-1}) a_i^m D_i` for `m >= 1` (resp.
    /// `k^-_{i,-m} = -(q - q^{-1}) a_i^{-m} D_i`), with `D_i` the diagonal
    /// of `<weight, alpha_i>` values. Any mode bound is available.
    Closed {
        xplus0: Vec<SpMat>,
        xminus0: Vec<SpMat>,
        /// Per finite node `i` (index `i - 1`): the geometric mode parameter
        /// `a_i`.
        params: Vec<Scalar>,
    },
    /// Explicitly tabulated modes up to a bound (used for user-supplied or
    /// perturbed realizations).
    Tabulated {
        bound: i64,
        xplus: Vec<(Vertex, i64, SpMat)>,
        xminus: Vec<(Vertex, i64, SpMat)>,
        kplus: Vec<(Vertex, i64, SpMat)>,
        kminus: Vec<(Vertex, i64, SpMat)>,
    },
    /// Only the mode-0 actions (through the Kac-Moody matrices) exist;
    /// tensor products are of this kind.
    None,
}

/// A requested generator action the realization cannot supply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActError {
    ModeUnavailable(GeneratorSymbol),
    BadVertex(GeneratorSymbol),
}

impl fmt::Display for ActError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActError::ModeUnavailable(g) => write!(f, "no action data for {g}"),
            ActError::BadVertex(g) => write!(f, "vertex out of range in {g}"),
        }
    }
}

/// A finite-dimensional graded module realization.
#[derive(Clone, Debug)]
pub struct ModuleRealization {
    diagram: DynkinDiagram,
    field: Field,
    dim: usize,
    labels: Vec<String>,
    weights: Vec<Weight>,
    /// `e_i`, `f_i`, `k_i`, `k_i^{-1}` for `i = 0..=rank` (index 0 is the
    /// affine node).
    km_e: Vec<SpMat>,
    km_f: Vec<SpMat>,
    km_k: Vec<SpMat>,
    km_k_inv: Vec<SpMat>,
    drinfeld: DrinfeldData,
    provenance: Provenance,
    spectral: Vec<SpectralFactor>,
}

impl ModuleRealization {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        diagram: DynkinDiagram,
        field: Field,
        labels: Vec<String>,
        weights: Vec<Weight>,
        km_e: Vec<SpMat>,
        km_f: Vec<SpMat>,
        km_k: Vec<SpMat>,
        km_k_inv: Vec<SpMat>,
        drinfeld: DrinfeldData,
        provenance: Provenance,
        spectral: Vec<SpectralFactor>,
    ) -> Self {
        let dim = weights.len();
        assert_eq!(labels.len(), dim);
        let n = diagram.rank();
        assert_eq!(km_e.len(), n + 1);
        assert_eq!(km_f.len(), n + 1);
        assert_eq!(km_k.len(), n + 1);
        assert_eq!(km_k_inv.len(), n + 1);
        ModuleRealization {
            diagram,
            field,
            dim,
            labels,
            weights,
            km_e,
            km_f,
            km_k,
            km_k_inv,
            drinfeld,
            provenance,
            spectral,
        }
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weight_of(&self, basis_index: usize) -> &Weight {
        &self.weights[basis_index]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn spectral_params(&self) -> &[SpectralFactor] {
        &self.spectral
    }

    pub fn drinfeld_data(&self) -> &DrinfeldData {
        &self.drinfeld
    }

    /// Largest `|r|` for which Drinfeld modes are available: `None` means
    /// every mode (closed form).
    pub fn mode_bound(&self) -> Option<i64> {
        match &self.drinfeld {
            DrinfeldData::Closed { .. } => None,
            DrinfeldData::Tabulated { bound, .. } => Some(*bound),
            DrinfeldData::None => Some(0),
        }
    }

    /// The action matrix of a generator symbol.
    pub fn act(&self, g: GeneratorSymbol) -> Result<SpMat, ActError> {
        use GeneratorSymbol::*;
        let n = self.diagram.rank();
        let finite = |i: Vertex| (1..=n).contains(&i);
        let affine_ok = |i: Vertex| i <= n;
        match g {
            E(i) if affine_ok(i) => Ok(self.km_e[i].clone()),
            F(i) if affine_ok(i) => Ok(self.km_f[i].clone()),
            KKac(i, s) if affine_ok(i) => Ok(if s >= 0 {
                self.km_k[i].clone()
            } else {
                self.km_k_inv[i].clone()
            }),
            K(i, s) if finite(i) => self.act(KKac(i, s)),
            XPlus(i, r) if finite(i) => self.drinfeld_x(i, r, true),
            XMinus(i, r) if finite(i) => self.drinfeld_x(i, r, false),
            KPlusMode(i, r) if finite(i) && r >= 0 => self.drinfeld_k(i, r, true),
            KMinusMode(i, r) if finite(i) && r <= 0 => self.drinfeld_k(i, r, false),
            H(i, s) if finite(i) && s != 0 => self.h_operator(i, s),
            _ => Err(ActError::BadVertex(g)),
        }
    }

    /// Product of generator actions along a word (the empty word is the
    /// identity).
    pub fn act_word(&self, word: &[GeneratorSymbol]) -> Result<SpMat, ActError> {
        let mut acc = SpMat::identity(self.dim, &self.field);
        for &g in word {
            acc = acc.mul(&self.act(g)?);
        }
        Ok(acc)
    }

    fn drinfeld_x(&self, i: Vertex, r: i64, plus: bool) -> Result<SpMat, ActError> {
        let sym = if plus {
            GeneratorSymbol::XPlus(i, r)
        } else {
            GeneratorSymbol::XMinus(i, r)
        };
        match &self.drinfeld {
            DrinfeldData::Closed {
                xplus0,
                xminus0,
                params,
            } => {
                let base = if plus { &xplus0[i - 1] } else { &xminus0[i - 1] };
                if r == 0 {
                    return Ok(base.clone());
                }
                let a = params[i - 1]
                    .clone();
                let factor = pow_scalar(&a, r);
                Ok(base.scale(&factor))
            }
            DrinfeldData::Tabulated {
                bound,
                xplus,
                xminus,
                ..
            } => {
                if r.abs() > *bound {
                    return Err(ActError::ModeUnavailable(sym));
                }
                let table = if plus { xplus } else { xminus };
                table
                    .iter()
                    .find(|(v, m, _)| *v == i && *m == r)
                    .map(|(_, _, m)| m.clone())
                    .ok_or(ActError::ModeUnavailable(sym))
            }
            DrinfeldData::None => {
                if r == 0 {
                    Ok(if plus {
                        self.km_e[i].clone()
                    } else {
                        self.km_f[i].clone()
                    })
                } else {
                    Err(ActError::ModeUnavailable(sym))
                }
            }
        }
    }

    fn drinfeld_k(&self, i: Vertex, r: i64, plus: bool) -> Result<SpMat, ActError> {
        if r == 0 {
            return Ok(if plus {
                self.km_k[i].clone()
            } else {
                self.km_k_inv[i].clone()
            });
        }
        let sym = if plus {
            GeneratorSymbol::KPlusMode(i, r)
        } else {
            GeneratorSymbol::KMinusMode(i, r)
        };
        match &self.drinfeld {
            DrinfeldData::Closed { params, .. } => {
                // k^+_{i,m} = (q - q^{-1}) a_i^m D_i (m >= 1),
                // k^-_{i,-m} = -(q - q^{-1}) a_i^{-m} D_i.
                let a = &params[i - 1];
                let mut coeff = &self.field.q_minus_qinv() * &pow_scalar(a, r);
                if !plus {
                    coeff = -&coeff;
                }
                let mut m = SpMat::zero(self.dim, self.dim);
                for (b, w) in self.weights.iter().enumerate() {
                    let pair = pairing(&RootVector::simple(self.diagram.rank(), i), w);
                    if pair != 0 {
                        m.set(b, b, &coeff * &self.field.from_int(pair));
                    }
                }
                Ok(m)
            }
            DrinfeldData::Tabulated {
                bound,
                kplus,
                kminus,
                ..
            } => {
                if r.abs() > 2 * *bound {
                    return Err(ActError::ModeUnavailable(sym));
                }
                let table = if plus { kplus } else { kminus };
                table
                    .iter()
                    .find(|(v, m, _)| *v == i && *m == r)
                    .map(|(_, _, m)| m.clone())
                    .ok_or(ActError::ModeUnavailable(sym))
            }
            DrinfeldData::None => Err(ActError::ModeUnavailable(sym)),
        }
    }

    fn h_operator(&self, i: Vertex, s: i64) -> Result<SpMat, ActError> {
        let ops = series::h_operators(self, i, s.unsigned_abs() as usize).map_err(|_| {
            ActError::ModeUnavailable(GeneratorSymbol::H(i, s))
        })?;
        let idx = (s.unsigned_abs() - 1) as usize;
        Ok(if s > 0 {
            ops.plus[idx].clone()
        } else {
            ops.minus[idx].clone()
        })
    }

    pub(crate) fn with_spectral(mut self, spectral: Vec<SpectralFactor>) -> Self {
        self.spectral = spectral;
        self
    }

    /// Replaces the action of one Drinfeld generator mode by a perturbed
    /// copy, freezing all closed-form modes with `|r| <= bound` into a
    /// tabulated realization. Used to demonstrate that the relation checker
    /// catches corrupted data.
    pub fn with_perturbed_entry(
        &self,
        sym: GeneratorSymbol,
        row: usize,
        col: usize,
        delta: &Scalar,
        bound: i64,
    ) -> Result<ModuleRealization, ActError> {
        use GeneratorSymbol::*;
        let n = self.diagram.rank();
        let mut xplus = Vec::new();
        let mut xminus = Vec::new();
        let mut kplus = Vec::new();
        let mut kminus = Vec::new();
        for i in 1..=n {
            for r in -bound..=bound {
                xplus.push((i, r, self.act(XPlus(i, r))?));
                xminus.push((i, r, self.act(XMinus(i, r))?));
            }
            for r in 0..=2 * bound {
                kplus.push((i, r, self.act(KPlusMode(i, r))?));
                kminus.push((i, -r, self.act(KMinusMode(i, -r))?));
            }
        }
        {
            let table = match sym {
                XPlus(..) => &mut xplus,
                XMinus(..) => &mut xminus,
                KPlusMode(..) => &mut kplus,
                KMinusMode(..) => &mut kminus,
                other => return Err(ActError::BadVertex(other)),
            };
            let (i, r) = match sym {
                XPlus(i, r) | XMinus(i, r) | KPlusMode(i, r) | KMinusMode(i, r) => (i, r),
                _ => unreachable!(),
            };
            let entry = table
                .iter_mut()
                .find(|(v, m, _)| *v == i && *m == r)
                .ok_or(ActError::ModeUnavailable(sym))?;
            let old = entry.2.get(row, col).cloned().unwrap_or_else(|| self.field.zero());
            entry.2.set(row, col, &old + delta);
        }
        Ok(ModuleRealization {
            drinfeld: DrinfeldData::Tabulated {
                bound,
                xplus,
                xminus,
                kplus,
                kminus,
            },
            provenance: Provenance::Custom,
            ..self.clone()
        })
    }
}

fn pow_scalar(a: &Scalar, r: i64) -> Scalar {
    if r == 0 {
        panic!("pow_scalar expects r != 0; the caller handles mode zero");
    }
    let base = if r > 0 {
        a.clone()
    } else {
        a.inverse().expect("nonzero spectral parameter")
    };
    let mut acc = base.clone();
    for _ in 1..r.unsigned_abs() {
        acc = &acc * &base;
    }
    acc
}

/// Errors raised while building realizations.
#[derive(Clone, Debug)]
pub enum BuildError {
    NotTypeA,
    InvalidZeta(Rat),
    ZeroSpectralParameter,
    BadNode(Vertex),
    DiagramMismatch,
    FieldMismatch,
    Act(ActError),
    /// The constructed matrices failed the defining-relation check; the
    /// report is attached.
    Relations(crate::relations::RelationReport),
    /// The affine Kac-Moody self-check failed (a convention bug).
    KacMoody(String),
    EmptySpec,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::NotTypeA => write!(f, "evaluation modules require a type A diagram"),
            BuildError::InvalidZeta(z) => write!(f, "invalid zeta {z}"),
            BuildError::ZeroSpectralParameter => write!(f, "spectral parameter must be nonzero"),
            BuildError::BadNode(k) => write!(f, "node {k} out of range"),
            BuildError::DiagramMismatch => write!(f, "factors live over different diagrams"),
            BuildError::FieldMismatch => write!(f, "factors live over different ground fields"),
            BuildError::Act(e) => write!(f, "{e}"),
            BuildError::Relations(r) => {
                write!(f, "defining relations violated ({} failures)", r.failures().count())
            }
            BuildError::KacMoody(s) => write!(f, "Kac-Moody self-check failed: {s}"),
            BuildError::EmptySpec => write!(f, "empty module specification"),
        }
    }
}

impl From<ActError> for BuildError {
    fn from(e: ActError) -> Self {
        BuildError::Act(e)
    }
}

/// Evaluates a tensor expression to a matrix on `m1 (x) m2`, flattening the
/// basis row-major (`(b1, b2) -> b1 * dim2 + b2`).
pub fn eval_tensor_expression(
    expr: &TensorExpression,
    m1: &ModuleRealization,
    m2: &ModuleRealization,
) -> Result<SpMat, ActError> {
    let mut acc = SpMat::zero(m1.dimension() * m2.dimension(), m1.dimension() * m2.dimension());
    for (c, left, right) in expr.terms() {
        let l = m1.act_word(left)?;
        let r = m2.act_word(right)?;
        acc = acc.add(&l.kron(&r).scale(c));
    }
    Ok(acc)
}

/// The tensor product of two realizations under the chosen coproduct.
///
/// Only the Kac-Moody actions are populated (they generate the algebra);
/// the Drinfeld mode bound of the result is 0.
pub fn tensor(
    m1: &ModuleRealization,
    m2: &ModuleRealization,
    coproduct: Coproduct,
) -> Result<ModuleRealization, BuildError> {
    if m1.diagram() != m2.diagram() {
        return Err(BuildError::DiagramMismatch);
    }
    if m1.field() != m2.field() {
        return Err(BuildError::FieldMismatch);
    }
    let d = m1.diagram().clone();
    let field = m1.field().clone();
    let n = d.rank();
    let dim1 = m1.dimension();
    let dim2 = m2.dimension();

    let mut labels = Vec::with_capacity(dim1 * dim2);
    let mut weights = Vec::with_capacity(dim1 * dim2);
    for b1 in 0..dim1 {
        for b2 in 0..dim2 {
            labels.push(format!("{}(x){}", m1.labels()[b1], m2.labels()[b2]));
            weights.push(m1.weight_of(b1) + m2.weight_of(b2));
        }
    }

    let cop = |g| match coproduct {
        Coproduct::Circ => coproduct_circ(&field, g).expect("Kac-Moody generator"),
        Coproduct::Bullet => coproduct_bullet(&field, g).expect("Kac-Moody generator"),
    };

    let mut km_e = Vec::with_capacity(n + 1);
    let mut km_f = Vec::with_capacity(n + 1);
    let mut km_k = Vec::with_capacity(n + 1);
    let mut km_k_inv = Vec::with_capacity(n + 1);
    for i in 0..=n {
        km_e.push(eval_tensor_expression(&cop(GeneratorSymbol::E(i)), m1, m2)?);
        km_f.push(eval_tensor_expression(&cop(GeneratorSymbol::F(i)), m1, m2)?);
        km_k.push(eval_tensor_expression(
            &cop(GeneratorSymbol::KKac(i, 1)),
            m1,
            m2,
        )?);
        km_k_inv.push(eval_tensor_expression(
            &cop(GeneratorSymbol::KKac(i, -1)),
            m1,
            m2,
        )?);
    }

    let mut spectral = m1.spectral_params().to_vec();
    spectral.extend_from_slice(m2.spectral_params());

    Ok(ModuleRealization::from_parts(
        d,
        field,
        labels,
        weights,
        km_e,
        km_f,
        km_k,
        km_k_inv,
        DrinfeldData::None,
        Provenance::Tensor {
            coproduct,
            left: Box::new(m1.clone()),
            right: Box::new(m2.clone()),
        },
        spectral,
    ))
}

/// A highest-weight vector candidate: an element of the joint kernel of the
/// finite-part raising operators.
#[derive(Clone, Debug)]
pub struct HwVector {
    pub vector: SpVec,
    /// The common weight of the vector's support, when it is a weight
    /// vector.
    pub weight: Option<Weight>,
    /// Whether every available `x^+_{i,r}` mode also kills it.
    pub killed_by_all_xplus: bool,
}

/// Basis of the joint kernel of `e_i`, `i in I` (the finite part), flagging
/// vectors killed by every available `x^+` mode.
pub fn highest_weight_vectors(m: &ModuleRealization) -> Vec<HwVector> {
    let n = m.diagram().rank();
    let dim = m.dimension();
    // Stack the raising operators vertically and take the null space.
    let mut stacked = SpMat::zero(n * dim, dim);
    for i in 1..=n {
        for (r, c, s) in m.km_e[i].triplets() {
            stacked.set((i - 1) * dim + r, c, s.clone());
        }
    }
    let kernel = nullspace(&stacked, m.field());
    kernel
        .into_iter()
        .map(|v| {
            let weight = common_weight(m, &v);
            let killed = xplus_kills(m, &v);
            HwVector {
                vector: v,
                weight,
                killed_by_all_xplus: killed,
            }
        })
        .collect()
}

fn common_weight(m: &ModuleRealization, v: &SpVec) -> Option<Weight> {
    let mut it = v.iter();
    let first = it.next()?;
    let w = m.weight_of(first.0).clone();
    for (b, _) in it {
        if *m.weight_of(b) != w {
            return None;
        }
    }
    Some(w)
}

fn xplus_kills(m: &ModuleRealization, v: &SpVec) -> bool {
    let n = m.diagram().rank();
    match m.drinfeld_data() {
        DrinfeldData::Closed { xplus0, .. } => {
            // x^+_{i,r} = a_i^r x^+_{i,0} with a_i nonzero, so mode 0
            // decides all modes.
            (0..n).all(|i| xplus0[i].apply(v).is_zero())
        }
        DrinfeldData::Tabulated { bound, .. } => (1..=n).all(|i| {
            (-bound..=*bound).all(|r| {
                m.act(GeneratorSymbol::XPlus(i, r))
                    .map(|mat| mat.apply(v).is_zero())
                    .unwrap_or(true)
            })
        }),
        DrinfeldData::None => (1..=n).all(|i| m.km_e[i].apply(v).is_zero()),
    }
}

/// The unique highest-weight line, if there is exactly one kernel vector; a
/// prerequisite for reading off Drinfeld polynomials.
pub fn unique_highest_weight(m: &ModuleRealization) -> Option<HwVector> {
    let mut hw = highest_weight_vectors(m);
    if hw.len() == 1 {
        hw.pop()
    } else {
        None
    }
}

/// The index of the basis vector spanning the full-weight top line of a
/// tensor product (the tensor of factor highest-weight basis vectors),
/// when both factors have basis highest-weight vectors.
pub fn top_basis_index(m1: &ModuleRealization, m2: &ModuleRealization) -> Option<usize> {
    let b1 = basis_hw_index(m1)?;
    let b2 = basis_hw_index(m2)?;
    Some(b1 * m2.dimension() + b2)
}

/// The basis index of the highest-weight vector when the module's unique
/// `e_i`-kernel vector is a single basis vector.
pub fn basis_hw_index(m: &ModuleRealization) -> Option<usize> {
    let hw = unique_highest_weight(m)?;
    let mut it = hw.vector.iter();
    let (idx, _) = it.next()?;
    if it.next().is_some() {
        return None;
    }
    Some(idx)
}

