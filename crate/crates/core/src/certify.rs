//! Spectral certificates for vanishing cohomology.
//!
//! A pure `D`-dimensional complex in which the link of every `(D - 2)`-face
//! is connected with normalized spectral gap above `1 - 1/D` has
//! `H^{D-1}(Δ; Q) = 0`. With `D = 2` and threshold `1/2` the same check on
//! vertex links certifies Kazhdan's property (T) for the fundamental group.
//!
//! Certificates are conservative: a gap must clear the threshold by more
//! than [`GAP_MARGIN`], and any link on which the Laplacian is undefined
//! fails the check.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, FlagSkeleton};
use crate::graph::{Graph, Vertex};
use crate::homology::{self, HomologyError, RankMethod};
use crate::spectral::{self, SpectralError};

/// Required excess of λ₂ over the threshold.
pub const GAP_MARGIN: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("certificate dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("degree must be at least 1")]
    DegreeTooSmall,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    /// The link is disconnected, or empty.
    Disconnected,
    IsolatedVertex,
    /// λ₂ does not exceed the threshold by the margin.
    #[serde(rename = "gap-below-threshold")]
    GapAtOrBelowThreshold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkFailure {
    pub face: Vec<Vertex>,
    pub reason: FailureReason,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingCertificate {
    #[serde(rename = "D")]
    pub dim: usize,
    pub pure: bool,
    pub threshold: f64,
    /// Smallest λ₂ among links where it is defined.
    pub min_gap: Option<f64>,
    pub links_checked: usize,
    pub verdict: Verdict,
    pub failures: Vec<LinkFailure>,
}

impl VanishingCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    /// The degree whose rational cohomology is certified to vanish.
    pub fn degree(&self) -> usize {
        self.dim - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyTVerdict {
    HasTCertified,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyTCertificate {
    #[serde(rename = "D")]
    pub dim: usize,
    pub pure: bool,
    pub threshold: f64,
    pub min_gap: Option<f64>,
    pub links_checked: usize,
    pub verdict: PropertyTVerdict,
    pub failures: Vec<LinkFailure>,
}

impl PropertyTCertificate {
    pub fn has_t(&self) -> bool {
        self.verdict == PropertyTVerdict::HasTCertified
    }
}

fn check_link(link: &Graph, threshold: f64) -> Result<f64, (FailureReason, Option<f64>)> {
    if link.n() == 0 {
        return Err((FailureReason::Disconnected, None));
    }
    if link.isolated_vertex().is_some() {
        return Err((FailureReason::IsolatedVertex, None));
    }
    match spectral::lambda2(link) {
        Ok(gap) if gap > threshold + GAP_MARGIN => Ok(gap),
        Ok(gap) => Err((FailureReason::GapAtOrBelowThreshold, Some(gap))),
        Err(SpectralError::Disconnected { .. }) => Err((FailureReason::Disconnected, None)),
        Err(SpectralError::IsolatedVertex(_)) => Err((FailureReason::IsolatedVertex, None)),
        Err(e) => panic!("link spectrum failed: {e}"),
    }
}

/// Checks purity of the `dim`-skeleton and the spectral gap of the link of
/// every `(dim - 2)`-face against `1 - 1/dim`.
pub fn garland_certify(sk: &FlagSkeleton, dim: usize) -> Result<VanishingCertificate, CertifyError> {
    if dim < 2 {
        return Err(CertifyError::DimensionTooSmall(dim));
    }
    if sk.cap() < dim {
        return Err(ComplexError::CapTooSmall {
            cap: sk.cap(),
            needed: dim,
        }
        .into());
    }
    let threshold = 1.0 - 1.0 / dim as f64;
    let pure = sk.is_pure(dim)?;
    let g = sk.graph();
    let mut failures = Vec::new();
    let mut min_gap: Option<f64> = None;
    let mut links_checked = 0;
    let mut members = Vec::with_capacity(dim - 1);
    for face in sk.face_list(dim - 2).expect("dim - 2 <= cap").iter() {
        members.clear();
        members.extend(face.iter().map(|&v| v as Vertex));
        let verts = g.common_neighbors(&members).expect("faces hold valid vertices");
        let link = g.induced_subgraph(&verts);
        links_checked += 1;
        match check_link(&link, threshold) {
            Ok(gap) => min_gap = Some(min_gap.map_or(gap, |m| m.min(gap))),
            Err((reason, lambda2)) => {
                if let Some(gap) = lambda2 {
                    min_gap = Some(min_gap.map_or(gap, |m| m.min(gap)));
                }
                failures.push(LinkFailure {
                    face: members.clone(),
                    reason,
                    lambda2,
                });
            }
        }
    }
    let verdict = if pure && failures.is_empty() {
        Verdict::Certified
    } else {
        Verdict::NotCertified
    };
    Ok(VanishingCertificate {
        dim,
        pure,
        threshold,
        min_gap,
        links_checked,
        verdict,
        failures,
    })
}

/// Vertex links of the 2-skeleton against the threshold 1/2.
pub fn zuk_certify(sk: &FlagSkeleton) -> Result<PropertyTCertificate, CertifyError> {
    let c = garland_certify(sk, 2)?;
    Ok(PropertyTCertificate {
        dim: c.dim,
        pure: c.pure,
        threshold: c.threshold,
        min_gap: c.min_gap,
        links_checked: c.links_checked,
        verdict: match c.verdict {
            Verdict::Certified => PropertyTVerdict::HasTCertified,
            Verdict::NotCertified => PropertyTVerdict::NotCertified,
        },
        failures: c.failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOutcome {
    pub certificate: VanishingCertificate,
    /// `β_k` from the homology audit, when requested.
    pub betti_k: Option<usize>,
}

impl PipelineOutcome {
    /// False only when the certificate claims vanishing and the audit
    /// disagrees, which would be a bug.
    pub fn consistent(&self) -> bool {
        !(self.certificate.is_certified() && self.betti_k.is_some_and(|b| b != 0))
    }
}

/// Certifies `H^k(X(g); Q) = 0` from the `(k + 1)`-skeleton, optionally
/// auditing `β_k` with `audit`.
pub fn vanishing_pipeline(
    g: &Graph,
    k: usize,
    audit: Option<&RankMethod>,
) -> Result<PipelineOutcome, CertifyError> {
    if k < 1 {
        return Err(CertifyError::DegreeTooSmall);
    }
    let sk = FlagSkeleton::build(g, k + 1);
    let certificate = garland_certify(&sk, k + 1)?;
    let betti_k = audit
        .map(|method| homology::betti_number(&sk, k, method))
        .transpose()?;
    Ok(PipelineOutcome { certificate, betti_k })
}
