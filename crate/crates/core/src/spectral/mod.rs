//! Normalized graph Laplacians and their spectra.
//!
//! `L = I - D^{-1/2} A D^{-1/2}` is the symmetric form of `I - (averaging
//! operator)`; both have the same eigenvalues, which lie in `[0, 2]`. The
//! multiplicity of 0 is the number of connected components.

mod eigen;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};

pub use eigen::symmetric_eigenvalues;

/// Absolute tolerance for eigenvalue assertions.
pub const EIGEN_TOL: f64 = 1e-9;
/// Eigenvalues below this count as zero modes.
pub const KERNEL_TOL: f64 = 1e-6;
/// Slack on the Wielandt-Hoffman comparison.
pub const PERTURBATION_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("vertex {0} is isolated; the normalized Laplacian is undefined")]
    IsolatedVertex(Vertex),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("QL iteration did not converge for eigenvalue {index} after {iterations} sweeps")]
    NoConvergence { index: usize, iterations: usize },
    #[error("graph has no vertices")]
    Empty,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedLaplacian {
    order: usize,
    entries: Vec<f64>,
}

impl NormalizedLaplacian {
    pub fn new(g: &Graph) -> Result<Self, SpectralError> {
        if let Some(v) = g.isolated_vertex() {
            return Err(SpectralError::IsolatedVertex(v));
        }
        let n = g.n();
        let inv_sqrt: Vec<f64> = (0..n)
            .map(|v| 1.0 / (g.degree(v).unwrap_or(0) as f64).sqrt())
            .collect();
        let mut entries = vec![0.0; n * n];
        for v in 0..n {
            entries[v * n + v] = 1.0;
        }
        for (u, v) in g.edges() {
            let x = -inv_sqrt[u] * inv_sqrt[v];
            entries[u * n + v] = x;
            entries[v * n + u] = x;
        }
        Ok(NormalizedLaplacian { order: n, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn spectrum(&self) -> Result<Spectrum, SpectralError> {
        let eigenvalues = symmetric_eigenvalues(&self.entries, self.order)?;
        Ok(Spectrum {
            eigenvalues,
            tolerance: EIGEN_TOL,
        })
    }

    /// Squared Frobenius norm of `self - other`.
    pub fn frobenius_distance_sq(&self, other: &NormalizedLaplacian) -> f64 {
        assert_eq!(self.order, other.order, "orders differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub tolerance: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Second-smallest eigenvalue, if the order is at least 2.
    pub fn lambda2(&self) -> Option<f64> {
        self.eigenvalues.get(1).copied()
    }

    pub fn zero_multiplicity(&self, tol: f64) -> usize {
        self.eigenvalues.iter().take_while(|&&x| x < tol).count()
    }

    /// Ascending JSON array of the eigenvalues.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.eigenvalues).expect("f64 slice serializes")
    }
}

pub fn laplacian(g: &Graph) -> Result<NormalizedLaplacian, SpectralError> {
    NormalizedLaplacian::new(g)
}

pub fn spectrum(g: &Graph) -> Result<Spectrum, SpectralError> {
    NormalizedLaplacian::new(g)?.spectrum()
}

/// Spectral gap of a connected graph with no isolated vertices.
pub fn lambda2(g: &Graph) -> Result<f64, SpectralError> {
    if g.n() == 0 {
        return Err(SpectralError::Empty);
    }
    if let Some(v) = g.isolated_vertex() {
        return Err(SpectralError::IsolatedVertex(v));
    }
    let components = g.component_count();
    if components > 1 {
        return Err(SpectralError::Disconnected { components });
    }
    let s = spectrum(g)?;
    Ok(s.lambda2().expect("a connected graph without isolated vertices has order >= 2"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationRecord {
    /// Sum of squared differences of the ascending-paired eigenvalues.
    pub lhs: f64,
    /// Squared Frobenius norm of the Laplacian difference.
    pub rhs: f64,
    pub ok: bool,
}

/// Compares the spectra of `g` and `g - e` against the Wielandt-Hoffman
/// bound `sum (a_i - b_i)^2 <= ||L - L'||_F^2`, eigenvalues paired in
/// ascending order.
pub fn perturbation_check(
    g: &Graph,
    edge: (Vertex, Vertex),
) -> Result<PerturbationRecord, SpectralError> {
    let h = g.delete_edge(edge.0, edge.1)?;
    let before = NormalizedLaplacian::new(g)?;
    let after = NormalizedLaplacian::new(&h)?;
    let a = before.spectrum()?;
    let b = after.spectrum()?;
    let lhs: f64 = a
        .eigenvalues
        .iter()
        .zip(&b.eigenvalues)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    let rhs = before.frobenius_distance_sq(&after);
    Ok(PerturbationRecord {
        lhs,
        rhs,
        ok: lhs <= rhs + PERTURBATION_SLACK,
    })
}
