//! Signature checks over the class representatives.

use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{allowed_smallest, representative, stability_samples, ClassId};
use crate::distances::{BoxDims, PathLabel, CANONICAL_SIX};

use super::raster::label_region;
use super::signature::{signature, RegionSignature};

#[derive(Debug, Clone, Serialize)]
pub struct ClassSignature {
    pub id: ClassId,
    pub a: f64,
    pub b: f64,
    pub strict_labels: Vec<PathLabel>,
    pub admissible: bool,
    pub endpoints_consistent: bool,
    /// Samples of the class whose signature differs from the representative's.
    pub unstable: Vec<(f64, f64)>,
    pub samples: usize,
    pub signature: Option<RegionSignature>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignatureSuite {
    pub resolution: usize,
    pub classes: Vec<ClassSignature>,
    /// Pairs of classes with equal signatures.
    pub duplicates: Vec<(ClassId, ClassId)>,
    pub class13_u0_components: Option<usize>,
    /// Labels never strictly smallest at any representative.
    pub missing_labels: Vec<PathLabel>,
    pub distinct: bool,
    pub stable: bool,
    pub admissible: bool,
    pub necessary: bool,
    pub passed: bool,
}

fn signature_at(
    a: f64,
    b: f64,
    resolution: usize,
    tie_tol: f64,
) -> Result<(RegionSignature, Vec<PathLabel>), String> {
    let d = BoxDims::new(a, b).map_err(|e| e.to_string())?;
    let r = label_region(&d, resolution, tie_tol).map_err(|e| e.to_string())?;
    let s = signature(&r).map_err(|e| e.to_string())?;
    Ok((s, r.strict_labels()))
}

fn check_class(id: ClassId, resolution: usize, tie_tol: f64) -> ClassSignature {
    let (a, b) = representative(id);
    let samples = stability_samples(id);
    let mut out = ClassSignature {
        id,
        a,
        b,
        strict_labels: Vec::new(),
        admissible: false,
        endpoints_consistent: false,
        unstable: Vec::new(),
        samples: samples.len(),
        signature: None,
        error: None,
    };
    match signature_at(a, b, resolution, tie_tol) {
        Ok((s, strict)) => {
            let allowed = allowed_smallest(id);
            out.admissible = strict.iter().all(|l| allowed.contains(l));
            out.endpoints_consistent = s.endpoints_consistent();
            out.strict_labels = strict;
            for (sa, sb) in samples {
                match signature_at(sa, sb, resolution, tie_tol) {
                    Ok((t, _)) if t == s => {}
                    _ => out.unstable.push((sa, sb)),
                }
            }
            out.signature = Some(s);
        }
        Err(e) => out.error = Some(e),
    }
    out
}

/// Signatures of all 47 representatives plus the stability samples of the
/// open classes, with distinctness, admissibility and necessity verdicts.
pub fn verify_signatures(resolution: usize, tie_tol: f64) -> SignatureSuite {
    let ids: Vec<ClassId> = ClassId::all().collect();
    let classes: Vec<ClassSignature> =
        ids.par_iter().map(|&id| check_class(id, resolution, tie_tol)).collect();
    let mut duplicates = Vec::new();
    for (i, p) in classes.iter().enumerate() {
        for q in &classes[i + 1..] {
            if p.signature.is_some() && p.signature == q.signature {
                duplicates.push((p.id, q.id));
            }
        }
    }
    let class13_u0_components =
        classes[12].signature.as_ref().map(|s| s.components.get(&PathLabel::U0).copied().unwrap_or(0));
    let missing_labels: Vec<PathLabel> =
        CANONICAL_SIX.into_iter().filter(|l| !classes.iter().any(|c| c.strict_labels.contains(l))).collect();
    let all_ok = classes.iter().all(|c| c.error.is_none());
    let distinct = all_ok && duplicates.is_empty();
    let stable =
        all_ok && classes.iter().all(|c| c.unstable.is_empty() && (c.id.dimension() < 2 || c.samples >= 3));
    let admissible = all_ok && classes.iter().all(|c| c.admissible);
    let necessary = missing_labels.is_empty();
    let passed = distinct
        && stable
        && admissible
        && necessary
        && class13_u0_components == Some(2)
        && classes.iter().all(|c| c.endpoints_consistent);
    SignatureSuite {
        resolution,
        classes,
        duplicates,
        class13_u0_components,
        missing_labels,
        distinct,
        stable,
        admissible,
        necessary,
        passed,
    }
}
