//! End-to-end reduction, certification, and verification.
//!
//! `cmd_reduce` turns a group presentation and a witness word into the
//! combinatorial data of the reduction: the Dowling matroid, the fully
//! inflated polymatroid, its double, and the separation target pair.
//! `cmd_certify` takes a finite-group witness and produces a certificate
//! with arrangement dumps and claimed predicates at an explicit scale.
//! `cmd_verify` recomputes every claim from the dumps.
//!
//! Scales are honest about feasibility: the complete construction on a
//! Dowling instance needs one inflation step per subset of E \ B
//! (hundreds of steps, ambient in the thousands), so certificates either
//! run the complete pipeline on the small fixture ("toy") or a truncated
//! prefix on the real instance ("truncated:K"). Stepwise claims are
//! per-step statements, hence truncation-sound; well-separatedness and
//! separation require the complete pipeline and are claimed at toy scale.

use crate::dowling::{
    build_dowling, build_weak_rep, find_generator_id, identity_id, witness_rank, Arrangement,
    DowlingError, WitnessRank,
};
use crate::exactla::{LaError, PrimeField};
use crate::expansion::{
    normalized_polymatroid, separates, separating_basis, CBasis, ExpansionError,
};
use crate::groups::{
    normalize, FiniteGroup, GroupError, Homomorphism, Letter, NormalizedPresentation,
    Presentation, Word,
};
use crate::inflation::{
    double_arr, inflate, is_well_separated, toy_weak_rep, ExtensionArrangement, InflationError,
    InflationTrace, ToyVariant,
};
use crate::matroids::{
    build_subset_order, full_comb_pipeline, submasks, Mask, MatroidError, Polymatroid,
    TriangleMatroid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Format version recorded in every artifact.
pub const ARTIFACT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    La(#[from] LaError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Dowling(#[from] DowlingError),
    #[error(transparent)]
    Inflation(#[from] InflationError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error("not a witness: rank {numerator}/{c} does not exceed 1")]
    NotAWitness { numerator: usize, c: usize },
    #[error("scale 'full' is not desk-feasible; use toy or truncated:K")]
    NotDeskScale,
    #[error("hash mismatch: {0}")]
    HashMismatch(String),
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
}

/// Certification scale. "Full" parses but is rejected by cmd_certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Scale {
    Toy,
    Truncated(usize),
    Full,
}

impl std::fmt::Display for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scale::Toy => write!(f, "toy"),
            Scale::Truncated(k) => write!(f, "truncated:{k}"),
            Scale::Full => write!(f, "full"),
        }
    }
}

impl std::str::FromStr for Scale {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "toy" {
            Ok(Scale::Toy)
        } else if s == "full" {
            Ok(Scale::Full)
        } else if let Some(k) = s.strip_prefix("truncated:") {
            k.parse::<usize>()
                .map(Scale::Truncated)
                .map_err(|e| format!("bad step count in scale '{s}': {e}"))
        } else {
            Err(format!("unknown scale '{s}' (expected toy | truncated:K | full)"))
        }
    }
}

impl TryFrom<String> for Scale {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Scale> for String {
    fn from(s: Scale) -> String {
        s.to_string()
    }
}

/// SHA-256 hex digest of the canonical JSON encoding.
pub fn content_hash<T: Serialize>(t: &T) -> Result<String, PipelineError> {
    let bytes = serde_json::to_vec(t)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Parses a word like "x", "x^-1", or "x y^-1 z" into letters.
pub fn parse_word(s: &str) -> Result<Word, PipelineError> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        let (name, exp) = match tok.strip_suffix("^-1") {
            Some(base) => (base, -1),
            None => (tok, 1),
        };
        if name.is_empty() || name.contains('^') {
            return Err(PipelineError::PreconditionViolation(format!(
                "cannot parse letter '{tok}'"
            )));
        }
        out.push((name.to_string(), exp));
    }
    if out.is_empty() {
        return Err(PipelineError::PreconditionViolation("empty word".into()));
    }
    Ok(out)
}

/// The computable data defining the reduction target family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionOutput {
    pub version: String,
    pub field_p: u64,
    pub presentation: Presentation,
    pub normalized: NormalizedPresentation,
    pub matroid: TriangleMatroid,
    /// Final polymatroid of the complete combinatorial pipeline.
    pub g: Polymatroid,
    /// Its double 2g, the polymatroid whose separating expansions form
    /// the reduction's finite matroid family.
    pub doubled_g: Polymatroid,
    /// Element ids of the separation target pair (w^(1), e^(1)).
    pub target: (usize, usize),
    pub hash: String,
}

impl ReductionOutput {
    pub fn compute_hash(&self) -> Result<String, PipelineError> {
        let mut c = self.clone();
        c.hash = String::new();
        content_hash(&c)
    }
}

/// One compatibility claim: c * expected_g = dim of the arrangement sum
/// over `mask` after pipeline step `step` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatCheckpoint {
    pub step: usize,
    pub mask: Mask,
    pub expected_g: u64,
}

/// The separation portion of a toy-scale certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationClaim {
    pub x: usize,
    pub y: usize,
    pub basis: CBasis,
    pub doubled_g: Polymatroid,
    pub separates: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub pass: bool,
}

/// A witness-driven certificate: dumps plus claimed predicates, all
/// recomputable by `cmd_verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: String,
    pub field_p: u64,
    pub reduction: ReductionOutput,
    pub group: FiniteGroup,
    pub hom: Homomorphism,
    pub scale: Scale,
    pub seed: u64,
    pub witness: WitnessRank,
    /// Weak representation of the reduction matroid from the witness.
    pub weak_rep: Arrangement,
    /// Matroid and starting arrangement of the certified pipeline run
    /// (the toy fixture at toy scale, the instance itself when truncated).
    pub pipeline_matroid: TriangleMatroid,
    pub pipeline_start: Arrangement,
    pub trace: InflationTrace,
    pub inflated: Arrangement,
    pub doubled: Arrangement,
    pub checkpoints: Vec<CompatCheckpoint>,
    pub separation: Option<SeparationClaim>,
    pub claims: Vec<Claim>,
    pub hash: String,
}

impl Certificate {
    pub fn compute_hash(&self) -> Result<String, PipelineError> {
        let mut c = self.clone();
        c.hash = String::new();
        content_hash(&c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub all_pass: bool,
    pub claims: Vec<ClaimReport>,
}

/// Builds the reduction data from a presentation (and optional word
/// override). The combinatorial pipeline runs to completion.
pub fn cmd_reduce(
    pres: &Presentation,
    word: Option<&[Letter]>,
    field: PrimeField,
) -> Result<ReductionOutput, PipelineError> {
    let mut pres = pres.clone();
    if let Some(w) = word {
        pres.word = w.to_vec();
    }
    pres.validate()?;
    let np = normalize(&pres)?;
    let matroid = build_dowling(&np)?;
    // the complete combinatorial pipeline runs one step per subset of
    // E \ B; beyond 12 ground elements (one normalized generator) that
    // is no longer desk-feasible
    if matroid.n() > 12 {
        return Err(PipelineError::PreconditionViolation(format!(
            "instance has {} ground elements; the complete combinatorial \
             pipeline is desk-feasible only up to 12",
            matroid.n()
        )));
    }
    let order = build_subset_order(&matroid);
    let stages = full_comb_pipeline(&matroid, &order, None)?;
    let g = stages.last().expect("pipeline returns at least g_0").clone();
    let doubled_g = g.double();
    let w_id = find_generator_id(&matroid, &np.word, false, 1).ok_or_else(|| {
        PipelineError::PreconditionViolation(format!(
            "word generator {} missing from the matroid",
            np.word
        ))
    })?;
    let mut out = ReductionOutput {
        version: ARTIFACT_VERSION.to_string(),
        field_p: field.modulus(),
        presentation: pres,
        normalized: np,
        matroid,
        g,
        doubled_g,
        target: (w_id, identity_id(1)),
        hash: String::new(),
    };
    out.hash = out.compute_hash()?;
    Ok(out)
}

/// Checkpoint masks for compatibility claims after step i (1-based):
/// all D ∪ S_j for D ⊆ B and j ≤ i, plus B ∪ S_i, plus sampled B ∪ T.
fn checkpoint_masks(
    m: &TriangleMatroid,
    steps: &[Mask],
    i: usize,
    seed: u64,
) -> Vec<Mask> {
    let bmask = m.basis_mask();
    let mut out = Vec::new();
    // claim 1 masks, B ∪ T: exhaustive on small instances, sampled above
    if m.n() <= 6 {
        for t in 0..(1u64 << m.n()) as Mask {
            out.push(bmask | t);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64) << 8);
        let full = m.full_mask();
        for _ in 0..8 {
            out.push(bmask | (rng.gen_range(0..=full) & full));
        }
    }
    // claim 2 masks: D ∪ S_j for every D ⊆ B and every processed step
    for &sj in &steps[..i] {
        for d in submasks(bmask) {
            out.push(d | sj);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Replays the inflation pipeline while collecting or checking
/// compatibility checkpoints against the combinatorial stages.
fn run_pipeline_with_checkpoints(
    start: &Arrangement,
    m: &TriangleMatroid,
    steps: &[Mask],
    seed: u64,
    g_stages: &[Polymatroid],
) -> Result<(ExtensionArrangement, InflationTrace, Vec<CompatCheckpoint>), PipelineError> {
    let mut u = ExtensionArrangement::from_weak_rep(start.clone(), m.clone())?;
    let mut trace = InflationTrace::default();
    let mut checkpoints = Vec::new();
    for (i, &s) in steps.iter().enumerate() {
        let step_seed = seed.wrapping_add((i as u64 + 1) << 20);
        let (next, record) = inflate(&u, s, step_seed)?;
        u = next;
        trace.steps.push(record);
        let g_i = &g_stages[i + 1];
        for mask in checkpoint_masks(m, steps, i + 1, seed) {
            let expected_g = g_i.g(mask);
            if u.arr.c as u64 * expected_g != u.arr.dim_of(mask) as u64 {
                return Err(PipelineError::PreconditionViolation(format!(
                    "compatibility fails at step {}, mask {mask:#x}",
                    i + 1
                )));
            }
            checkpoints.push(CompatCheckpoint { step: i + 1, mask, expected_g });
        }
    }
    Ok((u, trace, checkpoints))
}

/// Certifies a witness at the requested scale.
pub fn cmd_certify(
    red: &ReductionOutput,
    group: &FiniteGroup,
    hom: &Homomorphism,
    scale: Scale,
    seed: u64,
) -> Result<Certificate, PipelineError> {
    if red.hash != red.compute_hash()? {
        return Err(PipelineError::HashMismatch("reduction file hash".into()));
    }
    let field = PrimeField::new(red.field_p)?;
    group.validate()?;
    hom.validate(&red.normalized, group)?;
    let weak_rep = build_weak_rep(&red.matroid, &red.normalized, group, hom, field)?;
    let witness = witness_rank(&weak_rep, &red.matroid, &red.normalized)?;
    if !witness.is_witness() {
        return Err(PipelineError::NotAWitness { numerator: witness.numerator, c: witness.c });
    }

    let (pipeline_matroid, pipeline_start, max_steps) = match scale {
        Scale::Full => return Err(PipelineError::NotDeskScale),
        Scale::Toy => {
            let (m, a) = toy_weak_rep(field, ToyVariant::Swap);
            (m, a, None)
        }
        Scale::Truncated(k) => (red.matroid.clone(), weak_rep.clone(), Some(k)),
    };
    let order = build_subset_order(&pipeline_matroid);
    let all_steps: Vec<Mask> = order.order.iter().copied().filter(|&s| s != 0).collect();
    let k = max_steps.unwrap_or(all_steps.len()).min(all_steps.len());
    let steps = &all_steps[..k];
    let g_stages = full_comb_pipeline(&pipeline_matroid, &order, Some(k))?;
    let (u, trace, checkpoints) =
        run_pipeline_with_checkpoints(&pipeline_start, &pipeline_matroid, steps, seed, &g_stages)?;
    let doubled = double_arr(&u.arr);

    let mut claims = vec![
        Claim { name: "reduction_hash".into(), pass: true },
        Claim { name: "reduction_consistent".into(), pass: true },
        Claim { name: "witness".into(), pass: true },
        Claim { name: "pipeline_replay".into(), pass: true },
        Claim { name: "compatibility".into(), pass: true },
        Claim { name: "doubling".into(), pass: true },
    ];
    // separation is a complete-pipeline property: the truncated prefix is
    // neither well-separated nor c-admissible, so it is claimed only when
    // the certified pipeline ran to completion
    let separation = if k == all_steps.len() {
        let w = ExtensionArrangement { arr: doubled.clone(), matroid: pipeline_matroid.clone() };
        let (x, y) = if scale == Scale::Toy { (3, 4) } else { red.target };
        if !is_well_separated(&w, x)? {
            return Err(PipelineError::PreconditionViolation(format!(
                "final arrangement is not well-separated with respect to {x}"
            )));
        }
        claims.push(Claim { name: "well_separated".into(), pass: true });
        let basis = separating_basis(&w, x, seed ^ 0x5e7a_ba5e)?;
        let c = doubled.c / 2;
        let doubled_g = normalized_polymatroid(&doubled, c)?;
        let sep = separates(&basis.combinatorial_type(), x, y, &doubled_g)?;
        claims.push(Claim { name: "separation".into(), pass: sep });
        Some(SeparationClaim { x, y, basis, doubled_g, separates: sep })
    } else {
        None
    };

    let mut cert = Certificate {
        version: ARTIFACT_VERSION.to_string(),
        field_p: red.field_p,
        reduction: red.clone(),
        group: group.clone(),
        hom: hom.clone(),
        scale,
        seed,
        witness,
        weak_rep,
        pipeline_matroid,
        pipeline_start,
        trace,
        inflated: u.arr,
        doubled,
        checkpoints,
        separation,
        claims,
        hash: String::new(),
    };
    cert.hash = cert.compute_hash()?;
    Ok(cert)
}

/// Recomputes every claim of a certificate from its dumps.
pub fn cmd_verify(cert: &Certificate) -> Report {
    let mut claims: Vec<ClaimReport> = Vec::new();
    let push = |claims: &mut Vec<ClaimReport>, name: &str, r: Result<bool, String>| match r {
        Ok(pass) => claims.push(ClaimReport { name: name.into(), pass, detail: None }),
        Err(e) => claims.push(ClaimReport { name: name.into(), pass: false, detail: Some(e) }),
    };

    // integrity first: a tampered certificate is rejected up front
    let hash_ok = match cert.compute_hash() {
        Ok(h) => h == cert.hash,
        Err(_) => false,
    };
    push(&mut claims, "certificate_hash", Ok(hash_ok));
    if !hash_ok {
        return Report { all_pass: false, claims };
    }

    push(
        &mut claims,
        "reduction_hash",
        cert.reduction
            .compute_hash()
            .map(|h| h == cert.reduction.hash)
            .map_err(|e| e.to_string()),
    );

    // the reduction's combinatorial content is recomputable
    push(&mut claims, "reduction_consistent", (|| {
        let field = PrimeField::new(cert.field_p).map_err(|e| e.to_string())?;
        let rebuilt = cmd_reduce(&cert.reduction.presentation, None, field).map_err(|e| e.to_string())?;
        Ok(rebuilt.normalized == cert.reduction.normalized
            && rebuilt.matroid == cert.reduction.matroid
            && rebuilt.g == cert.reduction.g
            && rebuilt.doubled_g == cert.reduction.doubled_g
            && rebuilt.target == cert.reduction.target)
    })());

    push(&mut claims, "witness", (|| {
        let field = PrimeField::new(cert.field_p).map_err(|e| e.to_string())?;
        cert.group.validate().map_err(|e| e.to_string())?;
        cert.hom.validate(&cert.reduction.normalized, &cert.group).map_err(|e| e.to_string())?;
        let rebuilt =
            build_weak_rep(&cert.reduction.matroid, &cert.reduction.normalized, &cert.group, &cert.hom, field)
                .map_err(|e| e.to_string())?;
        if rebuilt != cert.weak_rep {
            return Ok(false);
        }
        let wr = witness_rank(&cert.weak_rep, &cert.reduction.matroid, &cert.reduction.normalized)
            .map_err(|e| e.to_string())?;
        Ok(wr == cert.witness && wr.is_witness())
    })());

    // replay the pipeline: inflate re-checks the per-step rank-change
    // formulas, fullness, and the extension predicate internally
    let replay: Result<(ExtensionArrangement, InflationTrace, Vec<CompatCheckpoint>), String> = (|| {
        let order = build_subset_order(&cert.pipeline_matroid);
        let all_steps: Vec<Mask> = order.order.iter().copied().filter(|&s| s != 0).collect();
        let k = cert.trace.steps.len().min(all_steps.len());
        let g_stages =
            full_comb_pipeline(&cert.pipeline_matroid, &order, Some(k)).map_err(|e| e.to_string())?;
        run_pipeline_with_checkpoints(
            &cert.pipeline_start,
            &cert.pipeline_matroid,
            &all_steps[..k],
            cert.seed,
            &g_stages,
        )
        .map_err(|e| e.to_string())
    })();
    match &replay {
        Ok((u, trace, checkpoints)) => {
            push(
                &mut claims,
                "pipeline_replay",
                Ok(u.arr == cert.inflated && *trace == cert.trace),
            );
            push(&mut claims, "compatibility", Ok(*checkpoints == cert.checkpoints));
            push(&mut claims, "doubling", Ok(double_arr(&u.arr) == cert.doubled));
        }
        Err(e) => {
            push(&mut claims, "pipeline_replay", Err(e.clone()));
            push(&mut claims, "compatibility", Err("replay failed".into()));
            push(&mut claims, "doubling", Err("replay failed".into()));
        }
    }

    if let Some(sep) = &cert.separation {
        push(&mut claims, "well_separated", (|| {
            let w = ExtensionArrangement {
                arr: cert.doubled.clone(),
                matroid: cert.pipeline_matroid.clone(),
            };
            is_well_separated(&w, sep.x).map_err(|e| e.to_string())
        })());
        push(&mut claims, "separation", (|| {
            sep.basis.validate(cert.seed).map_err(|e| e.to_string())?;
            if sep.basis.parent != cert.doubled {
                return Ok(false);
            }
            let c = cert.doubled.c / 2;
            let g2 = normalized_polymatroid(&cert.doubled, c).map_err(|e| e.to_string())?;
            if g2 != sep.doubled_g {
                return Ok(false);
            }
            let got = separates(&sep.basis.combinatorial_type(), sep.x, sep.y, &g2)
                .map_err(|e| e.to_string())?;
            Ok(got == sep.separates && sep.separates)
        })());
    }

    // the recorded claim list must match what was recomputed
    let recorded_ok = cert.claims.iter().all(|c| c.pass)
        && cert.claims.len() + 1 == claims.len()
        && cert
            .claims
            .iter()
            .zip(claims.iter().skip(1))
            .all(|(a, b)| a.name == b.name);
    push(&mut claims, "claim_list", Ok(recorded_ok));

    let all_pass = claims.iter().all(|c| c.pass);
    Report { all_pass, claims }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::presentation_x_cubed;

    fn f() -> PrimeField {
        PrimeField::new(1009).unwrap()
    }

    fn x3_reduction() -> ReductionOutput {
        cmd_reduce(&presentation_x_cubed(), None, f()).unwrap()
    }

    #[test]
    fn scale_parse_roundtrip() {
        for s in ["toy", "truncated:30", "full"] {
            let sc: Scale = s.parse().unwrap();
            assert_eq!(sc.to_string(), s);
        }
        assert!("truncated:".parse::<Scale>().is_err());
        assert!("huge".parse::<Scale>().is_err());
    }

    #[test]
    fn parse_word_cases() {
        assert_eq!(parse_word("x").unwrap(), vec![("x".to_string(), 1)]);
        assert_eq!(
            parse_word("x y^-1").unwrap(),
            vec![("x".to_string(), 1), ("y".to_string(), -1)]
        );
        assert!(parse_word("").is_err());
        assert!(parse_word("x^2").is_err());
    }

    #[test]
    fn reduce_x_cubed_shape_and_determinism() {
        let r1 = x3_reduction();
        assert_eq!(r1.matroid.n(), 12);
        assert_eq!(r1.g.table.len(), 1 << 12);
        assert_eq!(r1.doubled_g.g(r1.matroid.full_mask()), 2 * r1.g.g(r1.matroid.full_mask()));
        // target pair: x^(1) and e^(1)
        assert_eq!(r1.target.1, identity_id(1));
        let r2 = x3_reduction();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
        assert_eq!(r1.hash, r1.compute_hash().unwrap());
    }

    #[test]
    fn word_override_is_recorded() {
        let red = cmd_reduce(&presentation_x_cubed(), Some(&[("x".to_string(), 1)]), f()).unwrap();
        assert_eq!(red.presentation.word, vec![("x".to_string(), 1)]);
        assert_eq!(red.normalized.word, "x");
    }

    #[test]
    fn reduce_rejects_oversized_instances() {
        let pres = Presentation {
            generators: vec!["x".into(), "y".into()],
            relators: vec![],
            word: vec![("x".into(), 1)],
        };
        assert!(matches!(
            cmd_reduce(&pres, None, f()),
            Err(PipelineError::PreconditionViolation(_))
        ));
    }

    #[test]
    fn certify_toy_and_verify_all_pass() {
        let red = x3_reduction();
        let group = FiniteGroup::cyclic(3);
        let hom = Homomorphism { images: vec![1] };
        let cert = cmd_certify(&red, &group, &hom, Scale::Toy, 7).unwrap();
        assert_eq!(cert.witness.numerator, 5);
        assert_eq!(cert.witness.c, 3);
        let sep = cert.separation.as_ref().expect("toy scale carries separation");
        assert!(sep.separates);
        assert!(cert.claims.iter().all(|c| c.pass));
        let report = cmd_verify(&cert);
        assert!(report.all_pass, "failing claims: {:?}", report.claims);
        // determinism
        let cert2 = cmd_certify(&red, &group, &hom, Scale::Toy, 7).unwrap();
        assert_eq!(
            serde_json::to_string(&cert).unwrap(),
            serde_json::to_string(&cert2).unwrap()
        );
    }

    #[test]
    fn trivial_hom_is_not_a_witness() {
        let red = x3_reduction();
        let group = FiniteGroup::cyclic(3);
        let hom = Homomorphism { images: vec![0] };
        assert!(matches!(
            cmd_certify(&red, &group, &hom, Scale::Toy, 7),
            Err(PipelineError::NotAWitness { numerator: 3, c: 3 })
        ));
    }

    #[test]
    fn full_scale_rejected() {
        let red = x3_reduction();
        let group = FiniteGroup::cyclic(3);
        let hom = Homomorphism { images: vec![1] };
        assert!(matches!(
            cmd_certify(&red, &group, &hom, Scale::Full, 7),
            Err(PipelineError::NotDeskScale)
        ));
    }

    #[test]
    fn tampered_certificate_rejected_up_front() {
        let red = x3_reduction();
        let group = FiniteGroup::cyclic(3);
        let hom = Homomorphism { images: vec![1] };
        let mut cert = cmd_certify(&red, &group, &hom, Scale::Toy, 7).unwrap();
        cert.seed = 8;
        let report = cmd_verify(&cert);
        assert!(!report.all_pass);
        assert_eq!(report.claims.len(), 1);
        assert_eq!(report.claims[0].name, "certificate_hash");
        // re-hashing a semantically broken certificate still fails a claim
        cert.hash = cert.compute_hash().unwrap();
        let report = cmd_verify(&cert);
        assert!(!report.all_pass);
        assert!(report.claims.iter().any(|c| !c.pass && c.name != "certificate_hash"));
    }

    #[test]
    fn mismatched_reduction_hash_detected() {
        let red = x3_reduction();
        let group = FiniteGroup::cyclic(3);
        let hom = Homomorphism { images: vec![1] };
        let mut bad = red.clone();
        bad.hash = format!("{:0>64}", "0");
        assert!(matches!(
            cmd_certify(&bad, &group, &hom, Scale::Toy, 7),
            Err(PipelineError::HashMismatch(_))
        ));
    }
}
