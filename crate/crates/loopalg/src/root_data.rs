//! Simply-laced root data: Dynkin diagrams, Cartan matrices, weight and root
//! lattices, the pairing, and `rho`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::scalar::Rat;

/// Vertices are labeled `1..=rank`; `0` is reserved for the affine node of
/// the extended diagram.
pub type Vertex = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramError {
    BadVertex(Vertex),
    EdgeLoop(Vertex),
    Disconnected,
    /// Not finite type: the leading principal minor of this order is not
    /// positive.
    NotPositiveDefinite { minor_order: usize, minor: Rat },
    EmptyDiagram,
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramError::BadVertex(v) => write!(f, "vertex {v} out of range"),
            DiagramError::EdgeLoop(v) => write!(f, "edge loop at vertex {v}"),
            DiagramError::Disconnected => write!(f, "diagram is not connected"),
            DiagramError::NotPositiveDefinite { minor_order, minor } => write!(
                f,
                "Cartan matrix is not positive definite: leading {minor_order}x{minor_order} minor = {minor}"
            ),
            DiagramError::EmptyDiagram => write!(f, "diagram has no vertices"),
        }
    }
}

/// A finite simply-laced Dynkin diagram (types A, D, E): a connected graph
/// without loops or multiple edges whose Cartan matrix is positive definite.
/// Both conditions are checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinDiagram {
    rank: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl DynkinDiagram {
    pub fn from_edges(rank: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, DiagramError> {
        if rank == 0 {
            return Err(DiagramError::EmptyDiagram);
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == 0 || a > rank {
                return Err(DiagramError::BadVertex(a));
            }
            if b == 0 || b > rank {
                return Err(DiagramError::BadVertex(b));
            }
            if a == b {
                return Err(DiagramError::EdgeLoop(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let d = DynkinDiagram {
            rank,
            edges: set.into_iter().collect(),
        };
        d.check_connected()?;
        d.check_positive_definite()?;
        Ok(d)
    }

    /// Type `A_n`: the chain `1 - 2 - ... - n`.
    pub fn type_a(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Self::from_edges(n, &edges).expect("A_n is finite type")
    }

    /// Type `D_n` (`n >= 4`): chain `1 - ... - (n-2)` with both `n-1` and
    /// `n` attached to `n-2`.
    pub fn type_d(n: usize) -> Self {
        assert!(n >= 4, "D_n requires rank >= 4");
        let mut edges: Vec<_> = (1..n - 2).map(|i| (i, i + 1)).collect();
        edges.push((n - 2, n - 1));
        edges.push((n - 2, n));
        Self::from_edges(n, &edges).expect("D_n is finite type")
    }

    /// Type `E_n` (`n` in `{6, 7, 8}`), Bourbaki numbering: chain
    /// `1 - 3 - 4 - 5 - ... - n` with `2` attached to `4`.
    pub fn type_e(n: usize) -> Self {
        assert!((6..=8).contains(&n), "E_n requires rank 6, 7 or 8");
        let mut edges = vec![(1, 3), (3, 4), (2, 4)];
        for i in 4..n {
            edges.push((i, i + 1));
        }
        Self::from_edges(n, &edges).expect("E_n is finite type")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Finite vertices `1..=rank`.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + Clone {
        1..=self.rank
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    /// Cartan matrix entry `a_ij = 2 delta_ij - n_ij`.
    pub fn cartan_entry(&self, i: Vertex, j: Vertex) -> i64 {
        if i == j {
            2
        } else if self.adjacent(i, j) {
            -1
        } else {
            0
        }
    }

    fn check_connected(&self) -> Result<(), DiagramError> {
        let mut seen = vec![false; self.rank + 1];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if self.vertices().all(|v| seen[v]) {
            Ok(())
        } else {
            Err(DiagramError::Disconnected)
        }
    }

    fn check_positive_definite(&self) -> Result<(), DiagramError> {
        // Leading principal minors of the Cartan matrix, by exact fraction
        // elimination.
        let n = self.rank;
        let mut m: Vec<Vec<Rat>> = (1..=n)
            .map(|i| (1..=n).map(|j| Rat::from_int(self.cartan_entry(i, j))).collect())
            .collect();
        let mut det = Rat::one();
        for k in 0..n {
            let pivot = m[k][k].clone();
            if pivot <= Rat::zero() {
                // det of leading (k+1) minor so far equals det * pivot after
                // elimination of the first k columns.
                return Err(DiagramError::NotPositiveDefinite {
                    minor_order: k + 1,
                    minor: &det * &pivot,
                });
            }
            det = &det * &pivot;
            for r in k + 1..n {
                if m[r][k].is_zero() {
                    continue;
                }
                let factor = &m[r][k] / &pivot;
                for c in k..n {
                    let sub = &factor * &m[k][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", describe(self))
    }
}

/// Integer Cartan matrix of a diagram, along with its source diagram data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entry `a_ij` with 1-based vertex labels.
    pub fn entry(&self, i: Vertex, j: Vertex) -> i64 {
        self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }
}

/// The Cartan matrix `a_ij = 2 delta_ij - n_ij`; positive definiteness was
/// asserted when the diagram was built.
pub fn cartan_matrix(d: &DynkinDiagram) -> CartanMatrix {
    let n = d.rank();
    CartanMatrix {
        entries: (1..=n)
            .map(|i| (1..=n).map(|j| d.cartan_entry(i, j)).collect())
            .collect(),
    }
}

/// An element of the weight lattice `P` in the basis of fundamental weights
/// `omega_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<i64>);

/// An element of the root lattice `Q` in the basis of simple roots `alpha_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootVector(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// `omega_i`.
    pub fn fundamental(rank: usize, i: Vertex) -> Self {
        let mut w = Weight::zero(rank);
        w.0[i - 1] = 1;
        w
    }

    pub fn coord(&self, i: Vertex) -> i64 {
        self.0[i - 1]
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Dominance: all coordinates nonnegative (membership in `P^+`).
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }
}

impl RootVector {
    pub fn zero(rank: usize) -> Self {
        RootVector(vec![0; rank])
    }

    /// `alpha_i`.
    pub fn simple(rank: usize, i: Vertex) -> Self {
        let mut r = RootVector::zero(rank);
        r.0[i - 1] = 1;
        r
    }

    pub fn coord(&self, i: Vertex) -> i64 {
        self.0[i - 1]
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Membership in `Q^+`.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    /// The image of the root vector in the weight lattice:
    /// `alpha_j = sum_i a_ij omega_i`.
    pub fn to_weight(&self, d: &DynkinDiagram) -> Weight {
        let n = d.rank();
        assert_eq!(self.rank(), n, "rank mismatch");
        let mut w = Weight::zero(n);
        for i in 1..=n {
            w.0[i - 1] = (1..=n)
                .map(|j| d.cartan_entry(i, j) * self.coord(j))
                .sum();
        }
        w
    }
}

macro_rules! coord_ops {
    ($t:ident) => {
        impl<'a> Add<&'a $t> for &$t {
            type Output = $t;
            fn add(self, rhs: &'a $t) -> $t {
                assert_eq!(self.0.len(), rhs.0.len(), "rank mismatch");
                $t(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }
        impl<'a> Sub<&'a $t> for &$t {
            type Output = $t;
            fn sub(self, rhs: &'a $t) -> $t {
                assert_eq!(self.0.len(), rhs.0.len(), "rank mismatch");
                $t(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(self.0.iter().map(|a| -a).collect())
            }
        }
    };
}

coord_ops!(Weight);
coord_ops!(RootVector);

/// The pairing `( | ) : Q x P -> Z` with `(alpha_i | omega_j) = delta_ij`,
/// extended bilinearly. In these bases it is the coordinate dot product.
pub fn pairing(alpha: &RootVector, lambda: &Weight) -> i64 {
    assert_eq!(alpha.rank(), lambda.rank(), "rank mismatch");
    alpha.0.iter().zip(&lambda.0).map(|(a, b)| a * b).sum()
}

/// The symmetric form on the root lattice, `(alpha_i | alpha_j) = a_ij`.
pub fn root_form(d: &DynkinDiagram, a: &RootVector, b: &RootVector) -> i64 {
    let n = d.rank();
    let mut acc = 0;
    for i in 1..=n {
        for j in 1..=n {
            acc += a.coord(i) * d.cartan_entry(i, j) * b.coord(j);
        }
    }
    acc
}

/// `rho = sum_i omega_i`.
pub fn weyl_rho(d: &DynkinDiagram) -> Weight {
    Weight(vec![1; d.rank()])
}

/// All positive roots, by closure of the simple roots under root addition
/// (for two roots `beta`, `alpha_i` of a simply-laced system, `beta +
/// alpha_i` is a root iff `(beta | alpha_i) = -1`). Sorted by height then
/// coordinates, so the output is deterministic.
pub fn positive_roots(d: &DynkinDiagram) -> Vec<RootVector> {
    let n = d.rank();
    let mut found: BTreeSet<RootVector> = d.vertices().map(|i| RootVector::simple(n, i)).collect();
    let mut frontier: Vec<RootVector> = found.iter().cloned().collect();
    while let Some(beta) = frontier.pop() {
        for i in 1..=n {
            let alpha = RootVector::simple(n, i);
            if root_form(d, &beta, &alpha) == -1 {
                let next = &beta + &alpha;
                if found.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    let mut roots: Vec<_> = found.into_iter().collect();
    roots.sort_by_key(|r| (r.height(), r.clone()));
    roots
}

/// The highest root `theta`, the unique root of maximal height.
pub fn highest_root(d: &DynkinDiagram) -> RootVector {
    positive_roots(d)
        .into_iter()
        .last()
        .expect("nonempty root system")
}

/// Writes a weight-lattice element as a root-lattice element when possible:
/// solves `A c = n` for the Cartan matrix `A` and checks integrality.
pub fn weight_to_root(d: &DynkinDiagram, w: &Weight) -> Option<RootVector> {
    let n = d.rank();
    assert_eq!(w.rank(), n, "rank mismatch");
    // Exact Gaussian elimination on [A | n].
    let mut m: Vec<Vec<Rat>> = (1..=n)
        .map(|i| {
            let mut row: Vec<Rat> = (1..=n)
                .map(|j| Rat::from_int(d.cartan_entry(i, j)))
                .collect();
            row.push(Rat::from_int(w.coord(i)));
            row
        })
        .collect();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, pivot_row);
        let pivot = m[k][k].clone();
        for c in k..=n {
            m[k][c] = &m[k][c] / &pivot;
        }
        for r in 0..n {
            if r != k && !m[r][k].is_zero() {
                let factor = m[r][k].clone();
                for c in k..=n {
                    let sub = &factor * &m[k][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
    }
    let mut coords = Vec::with_capacity(n);
    for r in 0..n {
        let v = &m[r][n];
        if !v.is_integer() {
            return None;
        }
        let num = v.numer();
        let small: i64 = num.try_into().ok()?;
        coords.push(small);
    }
    Some(RootVector(coords))
}

/// Name of the string label for diagram reports (not canonical; best-effort
/// recognition of the shipped presets).
pub fn describe(d: &DynkinDiagram) -> String {
    use alloc::format;
    let n = d.rank();
    if *d == DynkinDiagram::type_a(n) {
        return format!("A{n}");
    }
    if n >= 4 && *d == DynkinDiagram::type_d(n) {
        return format!("D{n}");
    }
    if (6..=8).contains(&n) && *d == DynkinDiagram::type_e(n) {
        return format!("E{n}");
    }
    format!("rank-{n} diagram")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_presets() {
        assert_eq!(cartan_matrix(&DynkinDiagram::type_a(1)).rows(), &[vec![2]]);
        assert_eq!(
            cartan_matrix(&DynkinDiagram::type_a(2)).rows(),
            &[vec![2, -1], vec![-1, 2]]
        );
        // D_4: off-diagonal -1 exactly for pairs containing the central
        // node 2.
        let d4 = DynkinDiagram::type_d(4);
        let cm = cartan_matrix(&d4);
        for i in 1..=4 {
            for j in 1..=4 {
                let expected = if i == j {
                    2
                } else if (i == 2) != (j == 2) {
                    -1
                } else {
                    0
                };
                assert_eq!(cm.entry(i, j), expected, "({i},{j})");
            }
        }
    }

    #[test]
    fn non_finite_rejected() {
        // The affine diagram A_2^(1) (a 3-cycle) is not positive definite.
        let err = DynkinDiagram::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap_err();
        assert!(matches!(err, DiagramError::NotPositiveDefinite { minor_order: 3, ref minor } if minor.is_zero()));
        // Disconnected graphs are rejected.
        let err = DynkinDiagram::from_edges(3, &[(1, 2)]).unwrap_err();
        assert_eq!(err, DiagramError::Disconnected);
        // Loops rejected.
        let err = DynkinDiagram::from_edges(2, &[(1, 1), (1, 2)]).unwrap_err();
        assert_eq!(err, DiagramError::EdgeLoop(1));
    }

    #[test]
    fn pairing_examples() {
        let d = DynkinDiagram::type_a(2);
        let a1 = RootVector::simple(2, 1);
        let w1 = Weight::fundamental(2, 1);
        let w2 = Weight::fundamental(2, 2);
        assert_eq!(pairing(&a1, &w1), 1);
        assert_eq!(pairing(&a1, &w2), 0);
        // (2 a_1 + a_2 | w_1 + 3 w_2) = 2 + 3 = 5
        let a = RootVector(vec![2, 1]);
        let w = &w1 + &(&w2 + &(&w2 + &w2));
        assert_eq!(pairing(&a, &w), 5);
        let _ = d;
    }

    #[test]
    fn rho_and_highest_root() {
        let d = DynkinDiagram::type_a(2);
        assert_eq!(weyl_rho(&d), Weight(vec![1, 1]));
        for i in 1..=2 {
            assert_eq!(pairing(&RootVector::simple(2, i), &weyl_rho(&d)), 1);
        }
        assert_eq!(highest_root(&DynkinDiagram::type_a(1)), RootVector(vec![1]));
        assert_eq!(
            highest_root(&DynkinDiagram::type_a(2)),
            RootVector(vec![1, 1])
        );
        assert_eq!(
            highest_root(&DynkinDiagram::type_a(3)),
            RootVector(vec![1, 1, 1])
        );
        // D_4 highest root doubles the central coordinate.
        assert_eq!(
            highest_root(&DynkinDiagram::type_d(4)),
            RootVector(vec![1, 2, 1, 1])
        );
        // |Phi^+| sanity: A_3 has 6, D_4 has 12.
        assert_eq!(positive_roots(&DynkinDiagram::type_a(3)).len(), 6);
        assert_eq!(positive_roots(&DynkinDiagram::type_d(4)).len(), 12);
    }

    #[test]
    fn weight_root_conversion() {
        let d = DynkinDiagram::type_a(2);
        let theta = highest_root(&d);
        let w = theta.to_weight(&d);
        assert_eq!(w, Weight(vec![1, 1]));
        assert_eq!(weight_to_root(&d, &w), Some(theta));
        // omega_1 is not in the root lattice of A_2.
        assert_eq!(weight_to_root(&d, &Weight::fundamental(2, 1)), None);
    }
}
