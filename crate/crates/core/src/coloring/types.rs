use alloc::format;
use alloc::vec::Vec;

use crate::graph::Graph;
use crate::linalg::{eig_sym, numeric_rank, Matrix, SymMatrix};
use crate::{Error, Result, Tolerances};

/// A vector `t`-coloring held as its Gram matrix together with a factor
/// `P` (rows `p_i`) of full column rank.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorColoring {
    pub t: f64,
    pub gram: SymMatrix,
    pub factors: Matrix,
    pub tight_edges: Vec<(usize, usize)>,
}

impl VectorColoring {
    /// Wraps a Gram matrix of `g`. The value is read off the mean diagonal,
    /// the factor comes from `gram_to_vectors`, and tight edges use
    /// `tol.tight_tol`.
    pub fn from_gram(g: &Graph, gram: SymMatrix, tol: &Tolerances) -> Result<Self> {
        let n = g.order();
        if gram.size() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: gram.size(),
            });
        }
        let t = if n == 0 { 1.0 } else { 1.0 + gram.trace() / n as f64 };
        let factors = gram_to_vectors(&gram, tol.rank_tol)?;
        let tight_edges = tight_pairs(g, &gram, tol.tight_tol);
        Ok(Self {
            t,
            gram,
            factors,
            tight_edges,
        })
    }

    pub fn order(&self) -> usize {
        self.gram.size()
    }

    /// `d`, the number of factor columns.
    pub fn rank(&self) -> usize {
        self.factors.cols()
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        self.factors.row(i)
    }

    pub fn is_tight(&self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        self.tight_edges.binary_search(&key).is_ok()
    }

    /// Neighbours `j` of `i` joined by a tight edge.
    pub fn tight_neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .tight_edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Checks the defining constraints at value `self.t`: diagonal within
    /// `tol.tight_tol` of `t - 1`, edges at most `-1 + tol.tight_tol`, and
    /// least eigenvalue at least `-tol.rank_tol * max(1, |M|)`.
    pub fn check_feasible(&self, g: &Graph, tol: &Tolerances) -> Result<()> {
        let n = g.order();
        if self.gram.size() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.gram.size(),
            });
        }
        for i in 0..n {
            let dev = (self.gram.get(i, i) - (self.t - 1.0)).abs();
            if dev > tol.tight_tol {
                return Err(Error::Construction(format!(
                    "diagonal entry {i} is off by {dev:e}"
                )));
            }
        }
        for &(i, j) in g.edges() {
            let v = self.gram.get(i, j) + 1.0;
            if v > tol.tight_tol {
                return Err(Error::Construction(format!(
                    "edge ({i}, {j}) violates the coloring bound by {v:e}"
                )));
            }
        }
        check_psd(&self.gram, tol.rank_tol)
    }
}

pub(crate) fn check_psd(x: &SymMatrix, tol: f64) -> Result<()> {
    let s = eig_sym(x)?;
    let lmin = s.lambda_min();
    if lmin < -tol * s.spectral_radius().max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: lmin,
        });
    }
    Ok(())
}

pub(crate) fn tight_pairs(g: &Graph, gram: &SymMatrix, tol: f64) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .copied()
        .filter(|&(i, j)| (gram.get(i, j) + 1.0).abs() <= tol)
        .collect()
}

/// Factor `P` with `P P^T = M`, one column per numerically nonzero
/// eigenvalue (in nonincreasing eigenvalue order).
pub fn gram_to_vectors(m: &SymMatrix, tol: f64) -> Result<Matrix> {
    let s = eig_sym(m)?;
    let scale = s.spectral_radius().max(1.0);
    if s.lambda_min() < -tol * scale {
        return Err(Error::NotPsd {
            min_eigenvalue: s.lambda_min(),
        });
    }
    let cut = tol * scale;
    let keep: Vec<usize> = (0..s.size()).filter(|&k| s.eigenvalues[k] > cut).collect();
    let n = m.size();
    Ok(Matrix::from_fn(n, keep.len(), |i, c| {
        let k = keep[c];
        let mut v = s.eigenvectors[(i, k)] * libm::sqrt(s.eigenvalues[k]);
        // fix the sign of each column by its first clearly nonzero entry
        let lead = (0..n)
            .map(|r| s.eigenvectors[(r, k)])
            .find(|x| x.abs() > 1e-9)
            .unwrap_or(1.0);
        if lead < 0.0 {
            v = -v;
        }
        v
    }))
}

/// Tight edges of `vc` with respect to `g`: `|M_ij + 1| <= tol`.
pub fn tight_edges(vc: &VectorColoring, g: &Graph, tol: f64) -> Vec<(usize, usize)> {
    tight_pairs(g, &vc.gram, tol)
}

/// A feasible point of the dual program together with its support graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWitness {
    pub b: SymMatrix,
    pub support: Graph,
    pub rank: usize,
    pub corank: usize,
    pub positive_diagonal: bool,
    pub connected: bool,
}

impl DualWitness {
    pub fn new(b: SymMatrix, tol: &Tolerances) -> Result<Self> {
        let n = b.size();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if b.get(i, j) > tol.support_tol {
                    edges.push((i, j));
                }
            }
        }
        let support = Graph::new(n, edges)?;
        let rank = numeric_rank(&b, tol.rank_tol)?;
        let positive_diagonal = (0..n).all(|i| b.get(i, i) > tol.support_tol);
        let connected = support.is_connected();
        Ok(Self {
            b,
            support,
            rank,
            corank: n - rank,
            positive_diagonal,
            connected,
        })
    }

    /// The dual objective `sum(B)`.
    pub fn value(&self) -> f64 {
        self.b.sum()
    }

    pub fn order(&self) -> usize {
        self.b.size()
    }
}

/// The edge-weighted form: `A >= 0` supported on edges with `I + A ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AForm {
    pub a: SymMatrix,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub perron: Vec<f64>,
}

impl AForm {
    /// Uses the top eigenvector of `a` (sign chosen nonnegative) as the
    /// stored vector.
    pub fn new(a: SymMatrix) -> Result<Self> {
        let s = eig_sym(&a)?;
        let mut u = s.vector(0);
        if u.iter().sum::<f64>() < 0.0 {
            for v in &mut u {
                *v = -*v;
            }
        }
        for v in &mut u {
            if *v < 0.0 && *v > -1e-9 {
                *v = 0.0;
            }
        }
        Ok(Self {
            lambda_max: s.lambda_max(),
            lambda_min: s.lambda_min(),
            a,
            perron: u,
        })
    }

    /// Keeps a caller-supplied unit vector.
    pub fn with_perron(a: SymMatrix, perron: Vec<f64>) -> Result<Self> {
        if perron.len() != a.size() {
            return Err(Error::DimensionMismatch {
                expected: a.size(),
                found: perron.len(),
            });
        }
        let s = eig_sym(&a)?;
        Ok(Self {
            lambda_max: s.lambda_max(),
            lambda_min: s.lambda_min(),
            a,
            perron,
        })
    }

    /// `||I + A|| = 1 + lambda_max(A)` (the spectral norm, as `I + A ⪰ 0`).
    pub fn norm(&self) -> f64 {
        1.0 + self.lambda_max
    }

    pub fn order(&self) -> usize {
        self.a.size()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn antipodal_factor() {
        let m = SymMatrix::identity(2).scaled(2.0).sub(&SymMatrix::ones(2));
        let p = gram_to_vectors(&m, 1e-6).unwrap();
        assert_eq!(p.cols(), 1);
        assert!((p[(0, 0)].abs() - 1.0).abs() < 1e-12);
        assert!((p[(0, 0)] + p[(1, 0)]).abs() < 1e-12);
    }

    #[test]
    fn planar_triangle_factor() {
        let m = SymMatrix::identity(3).scaled(3.0).sub(&SymMatrix::ones(3));
        let p = gram_to_vectors(&m, 1e-6).unwrap();
        assert_eq!(p.cols(), 2);
        assert!(p.gram().sub(&m).max_abs() < 1e-12);
        for c in 0..2 {
            assert!(p.column(c).iter().sum::<f64>().abs() < 1e-12);
        }
    }

    #[test]
    fn zero_gram_has_no_columns() {
        let p = gram_to_vectors(&SymMatrix::zeros(3), 1e-6).unwrap();
        assert_eq!((p.rows(), p.cols()), (3, 0));
    }

    #[test]
    fn indefinite_rejected() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(gram_to_vectors(&m, 1e-6), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn tight_edges_of_clique() {
        let g = Graph::complete(4).unwrap();
        let m = SymMatrix::identity(4).scaled(4.0).sub(&SymMatrix::ones(4));
        let vc = VectorColoring::from_gram(&g, m, &Tolerances::default()).unwrap();
        assert_eq!(vc.tight_edges.len(), 6);
        assert!((vc.t - 4.0).abs() < 1e-14);
        assert_eq!(tight_edges(&vc, &g, 1e-6), g.edges().to_vec());
    }
}
