//! Chen-Ricci inequality verdicts with equality-case detection.
//!
//! Each verdict evaluates one displayed inequality as lhs-vs-rhs at a point.
//! Where the sign audit finds that a printed curvature relation holds with
//! the opposite sign under the fixed pairing convention, the bound is
//! assembled along the same derivation chain with the audited signs, so the
//! statement being tested is the one the derivation actually proves; the
//! inequality direction then follows the audited sign. With an all-positive
//! profile the assembly reproduces the printed statements verbatim.

use crate::error::{Error, Result};
use crate::linalg::{project, Vector};
use crate::rmap::{MapAnalysis, RMapProblem};
use crate::rng::Rng;
use crate::scalar::Real;
use crate::spaceform::{SpaceFormKind, SpaceFormSpec};
use crate::submersion::{SubmersionAnalysis, SubmersionProblem};

pub const THM_GFCRV: &str = "GFCRV";
pub const THM_GFCRH: &str = "GFCRH";
pub const THM_GFCRVH: &str = "GFCRVH";
pub const THM_CRI_GCSF: &str = "CRI-GCSF";
pub const THM_CRI_GSSF: &str = "CRI-GSSF";
pub const THM_STRUCT_SUB: &str = "STRUCT-SUB";
pub const THM_RM_CRI: &str = "RM-CRI";
pub const THM_RM_ICRI: &str = "RM-ICRI";
pub const THM_COR_CRI: &str = "COR-CRI";
pub const THM_COR_ICRI: &str = "COR-ICRI";

pub const ALL_THEOREM_IDS: [&str; 10] = [
    THM_GFCRV,
    THM_GFCRH,
    THM_GFCRVH,
    THM_CRI_GCSF,
    THM_CRI_GSSF,
    THM_STRUCT_SUB,
    THM_RM_CRI,
    THM_RM_ICRI,
    THM_COR_CRI,
    THM_COR_ICRI,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// lhs >= rhs claimed
    Ge,
    /// lhs <= rhs claimed
    Le,
}

#[derive(Debug, Clone)]
pub struct InequalityVerdict<S> {
    pub theorem_id: String,
    /// Sub-case label for multi-part theorems.
    pub case: Option<String>,
    pub point: Vec<S>,
    pub lhs: S,
    pub rhs: S,
    /// Always lhs - rhs.
    pub slack: S,
    pub direction: Direction,
    pub holds: bool,
    pub equality: bool,
    /// None = not decidable / not applicable.
    pub conditions_met: Option<bool>,
    pub notes: Vec<String>,
}

fn tol_eq<S: Real>(lhs: S, rhs: S) -> S {
    S::of(1e-6) * (S::one() + lhs.abs() + rhs.abs())
}

fn make_verdict<S: Real>(
    theorem_id: &str,
    case: Option<String>,
    point: &[S],
    lhs: S,
    rhs: S,
    direction: Direction,
    conditions_met: Option<bool>,
    notes: Vec<String>,
) -> InequalityVerdict<S> {
    let slack = lhs - rhs;
    let tol = tol_eq(lhs, rhs);
    let holds = match direction {
        Direction::Ge => slack >= -tol,
        Direction::Le => slack <= tol,
    };
    let equality = slack.abs() <= tol;
    InequalityVerdict {
        theorem_id: theorem_id.to_string(),
        case,
        point: point.to_vec(),
        lhs,
        rhs,
        slack,
        direction,
        holds,
        equality,
        conditions_met,
        notes,
    }
}

fn cond_tol<S: Real>(scale: S) -> S {
    S::of(1e-6) * (S::one() + scale)
}

/// Direction of a bound whose dropped term carries the audited sign s.
fn dir_from_sign(s: i8) -> Direction {
    if s >= 0 {
        Direction::Ge
    } else {
        Direction::Le
    }
}

// ---------------------------------------------------------------------------
// General submersion bounds
// ---------------------------------------------------------------------------

/// Vertical bound: Ric^{ker}(v1) vs Ric^{M1}(v1) - s23 * n^2 |H|^2 / 4.
pub fn verify_gfcrv<S: Real>(an: &SubmersionAnalysis<S>) -> InequalityVerdict<S> {
    let s23 = S::of(an.sign_profile.s23 as f64);
    let lhs = an.ric_v_ker;
    let quarter = S::of(0.25);
    let n2 = S::of((an.n * an.n) as f64);
    let rhs = an.ric_v_m1 - s23 * quarter * n2 * an.h_norm_sq;
    let conds = an.t_equality_conditions(cond_tol(an.max_t_abs()));
    let mut notes = vec![];
    if let Some(direct) = an.ric_v_ker_direct {
        notes.push(format!(
            "fiber-chart Ric cross-check: audited {:?} vs direct {:?}",
            lhs.as_f64(),
            direct.as_f64()
        ));
    }
    if an.sign_profile.s23 < 0 {
        let raw = an.ric_v_m1 - quarter * n2 * an.h_norm_sq;
        notes.push(format!("printed-convention rhs (>=): {:?}", raw.as_f64()));
    }
    make_verdict(
        THM_GFCRV,
        None,
        &an.point,
        lhs,
        rhs,
        dir_from_sign(an.sign_profile.s23),
        Some(conds),
        notes,
    )
}

/// Horizontal bound: Ric^{perp}(h1) vs Ric^{M1}(h1).
pub fn verify_gfcrh<S: Real>(an: &SubmersionAnalysis<S>) -> InequalityVerdict<S> {
    let lhs = an.ric_h_perp;
    let rhs = an.ric_h_m1;
    let conds = an.a_equality_conditions(cond_tol(an.max_a_abs()));
    // Under the audited profile the dropped term is -s24 * 3 sum (A_1j)^2,
    // so the direction flips with s24.
    make_verdict(
        THM_GFCRH,
        None,
        &an.point,
        lhs,
        rhs,
        if an.sign_profile.s24 >= 0 { Direction::Le } else { Direction::Ge },
        Some(conds),
        vec![],
    )
}

/// Combined bound with the mixed sum, delta(N) and the tensor norms.
pub fn verify_gfcrvh<S: Real>(an: &SubmersionAnalysis<S>) -> InequalityVerdict<S> {
    let rhs = gfcrvh_rhs(
        an,
        an.ric_v_m1 + an.ric_h_m1 + an.mixed_sum,
    );
    let lhs = an.ric_v_ker + an.ric_h_perp;
    let conds = an.t_equality_conditions(cond_tol(an.max_t_abs()));
    let mut notes = vec![];
    // The derivation also drops the A_{1j} block when the two bounds are
    // summed; report those values without folding them into the condition
    // flag, and record that the alternating T-sum enters squared.
    notes.push(format!("sum 3*sum_(A_1j)^2 = {:?}", an.a_h1_defect().as_f64()));
    notes.push("alternating T-sum enters squared: (T_11 - T_22 - ... - T_nn)^2".into());
    make_verdict(
        THM_GFCRVH,
        None,
        &an.point,
        lhs,
        rhs,
        dir_from_sign(an.sign_profile.s23),
        Some(conds),
        notes,
    )
}

/// RHS of the combined bound given the model (or computed) curvature block:
/// block + s25 (delta(N) - |T^V|^2 + |A^H|^2) - s23 n^2 |H|^2/4 - s24 3 sum A_1j^2.
fn gfcrvh_rhs<S: Real>(an: &SubmersionAnalysis<S>, curvature_block: S) -> S {
    let s23 = S::of(an.sign_profile.s23 as f64);
    let s24 = S::of(an.sign_profile.s24 as f64);
    let s25 = S::of(an.sign_profile.s25 as f64);
    let n2 = S::of((an.n * an.n) as f64);
    curvature_block + s25 * (an.delta_n - an.norm_tv_sq + an.norm_ah_sq)
        - s23 * S::of(0.25) * n2 * an.h_norm_sq
        - s24 * an.a_h1_defect()
}

// ---------------------------------------------------------------------------
// Structure classification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    Invariant,
    AntiInvariant,
    SemiInvariant,
    Slant,
    SemiSlant,
    HemiSlant,
    Generic,
}

impl StructureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StructureKind::Invariant => "invariant",
            StructureKind::AntiInvariant => "anti_invariant",
            StructureKind::SemiInvariant => "semi_invariant",
            StructureKind::Slant => "slant",
            StructureKind::SemiSlant => "semi_slant",
            StructureKind::HemiSlant => "hemi_slant",
            StructureKind::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiPosition {
    Vertical,
    Horizontal,
    NotApplicable,
}

#[derive(Debug, Clone)]
pub struct StructureClass<S> {
    pub kind: StructureKind,
    pub theta: Option<S>,
    /// Max deviation of the slant cosine across sampled directions.
    pub slant_deviation: S,
    /// |P|^2 = sum_{i,j} g(P v_j, h_i)^2.
    pub p_sq: S,
    pub ph1_sq: S,
    pub qv1_sq: S,
    pub xi_position: XiPosition,
    pub eta_v1_sq: S,
    pub eta_h1_sq: S,
    /// Declared D1 dimension for the mixed classes.
    pub d1_dim: Option<usize>,
    pub v1_in_d1: Option<bool>,
}

const CLASS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
enum PureKind<S> {
    Invariant,
    AntiInvariant,
    Slant(S, S),
    Generic(S),
}

/// Classify the action of the structure tensor on one sub-distribution,
/// sampling seeded unit vectors of its span.
fn classify_span<S: Real>(
    j_of: &dyn Fn(&Vector<S>) -> Vector<S>,
    inner: &dyn Fn(&Vector<S>, &Vector<S>) -> S,
    span: &[Vector<S>],
    complement_q: &dyn Fn(&Vector<S>) -> Vector<S>,
    part_p: &dyn Fn(&Vector<S>) -> Vector<S>,
    rng: &mut Rng,
    samples: usize,
) -> PureKind<S> {
    let mut max_p = S::zero();
    let mut max_q = S::zero();
    let mut cos_lo = S::infinity();
    let mut cos_hi = S::neg_infinity();
    let mut any = false;
    for _ in 0..samples {
        let coeffs: Vec<S> = (0..span.len()).map(|_| rng.gaussian()).collect();
        let mut u = Vector::zeros(span[0].dim());
        for (c, v) in coeffs.iter().zip(span) {
            u.axpy(*c, v);
        }
        let norm = inner(&u, &u).sqrt();
        if norm < S::of(1e-6) {
            continue;
        }
        let u = u.scale(S::one() / norm);
        let ju = j_of(&u);
        let ju_norm = inner(&ju, &ju).max(S::zero()).sqrt();
        if ju_norm < S::of(1e-7) {
            // Structure annihilates the direction (e.g. the Reeb field).
            continue;
        }
        any = true;
        let p = part_p(&ju);
        let q = complement_q(&ju);
        let pn = inner(&p, &p).max(S::zero()).sqrt();
        let qn = inner(&q, &q).max(S::zero()).sqrt();
        max_p = max_p.max(pn);
        max_q = max_q.max(qn);
        let cos = qn / ju_norm;
        cos_lo = cos_lo.min(cos);
        cos_hi = cos_hi.max(cos);
    }
    if !any {
        // All sampled directions are annihilated: the image lies (trivially)
        // inside the distribution.
        return PureKind::Invariant;
    }
    let tol = S::of(CLASS_TOL);
    if max_p <= tol {
        return PureKind::Invariant;
    }
    if max_q <= tol {
        return PureKind::AntiInvariant;
    }
    let dev = cos_hi - cos_lo;
    if dev <= tol {
        let cos = (cos_lo + cos_hi) * S::of(0.5);
        return PureKind::Slant(cos.min(S::one()).max(-S::one()).acos(), dev);
    }
    PureKind::Generic(dev)
}

fn combine_kinds<S: Real>(
    whole: PureKind<S>,
    parts: Option<(PureKind<S>, PureKind<S>)>,
) -> (StructureKind, Option<S>, S) {
    match whole {
        PureKind::Invariant => (StructureKind::Invariant, Some(S::zero()), S::zero()),
        PureKind::AntiInvariant => {
            (StructureKind::AntiInvariant, Some(S::of(std::f64::consts::FRAC_PI_2)), S::zero())
        }
        PureKind::Slant(theta, dev) => (StructureKind::Slant, Some(theta), dev),
        PureKind::Generic(dev) => {
            if let Some((d1, d2)) = parts {
                match (d1, d2) {
                    (PureKind::Invariant, PureKind::AntiInvariant) => {
                        (StructureKind::SemiInvariant, None, dev)
                    }
                    (PureKind::Invariant, PureKind::Slant(t, d)) => {
                        (StructureKind::SemiSlant, Some(t), d)
                    }
                    (PureKind::AntiInvariant, PureKind::Slant(t, d)) => {
                        (StructureKind::HemiSlant, Some(t), d)
                    }
                    _ => (StructureKind::Generic, None, dev),
                }
            } else {
                (StructureKind::Generic, None, dev)
            }
        }
    }
}

/// Classify a structured submersion: how J (or phi) moves the vertical
/// distribution relative to the vertical/horizontal split.
pub fn classify_submersion<S: Real>(
    prob: &SubmersionProblem<S>,
    an: &SubmersionAnalysis<S>,
    d1_dim: Option<usize>,
    seed: u64,
) -> Result<StructureClass<S>> {
    use crate::chart::Structure;
    let p = &an.point;
    let (jmat, xi, eta): (crate::linalg::Mat<S>, Option<Vector<S>>, Option<Vector<S>>) =
        match &prob.source.structure {
            Structure::Complex { .. } => (prob.source.j_at(p)?, None, None),
            Structure::Contact { .. } => {
                let (phi, xi, eta) = prob.source.contact_at(p)?;
                (phi, Some(xi), Some(eta))
            }
            Structure::None => {
                return Err(Error::StructureMissing(
                    "structured classification requires J or phi on the source".into(),
                ))
            }
        };
    let g = an.g.clone();
    let horizontal = an.horizontal.clone();
    let vertical = an.vertical.clone();
    let j_of = move |v: &Vector<S>| jmat.matvec(v);
    let inner = {
        let g = g.clone();
        move |a: &Vector<S>, b: &Vector<S>| g.inner(a, b)
    };
    let to_h = {
        let g = g.clone();
        let h = horizontal.clone();
        move |v: &Vector<S>| project(v, &h, &g)
    };
    let to_v = {
        let g = g.clone();
        let vf = vertical.clone();
        move |v: &Vector<S>| project(v, &vf, &g)
    };

    let mut rng = Rng::new(seed);
    let whole = classify_span(
        &j_of,
        &inner,
        &an.vertical.vectors,
        &to_v,
        &to_h,
        &mut rng,
        64,
    );
    let parts = d1_dim.and_then(|k| {
        if k == 0 || k >= an.n {
            return None;
        }
        let d1: Vec<Vector<S>> = an.vertical.vectors[..k].to_vec();
        let d2: Vec<Vector<S>> = an.vertical.vectors[k..].to_vec();
        let k1 = classify_span(&j_of, &inner, &d1, &to_v, &to_h, &mut rng, 64);
        let k2 = classify_span(&j_of, &inner, &d2, &to_v, &to_h, &mut rng, 64);
        Some((k1, k2))
    });
    let (kind, theta, slant_deviation) = combine_kinds(whole, parts);

    // Norm block.
    let vv = &an.vertical.vectors;
    let hv = &an.horizontal.vectors;
    let mut p_sq = S::zero();
    for vj in vv {
        let jv = j_of(vj);
        for hi in hv {
            let c = inner(&jv, hi);
            p_sq += c * c;
        }
    }
    let mut ph1_sq = S::zero();
    {
        let jh1 = j_of(&hv[an.h1]);
        for (j, hj) in hv.iter().enumerate() {
            if j == an.h1 {
                continue;
            }
            let c = inner(&jh1, hj);
            ph1_sq += c * c;
        }
    }
    let mut qv1_sq = S::zero();
    if an.n > 0 {
        let jv1 = j_of(&vv[an.v1]);
        for (j, vj) in vv.iter().enumerate() {
            if j == an.v1 {
                continue;
            }
            let c = inner(&jv1, vj);
            qv1_sq += c * c;
        }
    }

    // Reeb position.
    let (xi_position, eta_v1_sq, eta_h1_sq) = match (xi, eta) {
        (Some(xiv), Some(etav)) => {
            let vpart = to_v(&xiv);
            let hpart = to_h(&xiv);
            let vn = inner(&vpart, &vpart);
            let hn = inner(&hpart, &hpart);
            let tol = S::of(1e-8);
            let pos = if hn <= tol {
                XiPosition::Vertical
            } else if vn <= tol {
                XiPosition::Horizontal
            } else {
                return Err(Error::StructureMissing(
                    "Reeb field is neither vertical nor horizontal at this point".into(),
                ));
            };
            let ev1 = if an.n > 0 { etav.dot(&vv[an.v1]) } else { S::zero() };
            let eh1 = etav.dot(&hv[an.h1]);
            (pos, ev1 * ev1, eh1 * eh1)
        }
        _ => (XiPosition::NotApplicable, S::zero(), S::zero()),
    };

    Ok(StructureClass {
        kind,
        theta,
        slant_deviation,
        p_sq,
        ph1_sq,
        qv1_sq,
        xi_position,
        eta_v1_sq,
        eta_h1_sq,
        d1_dim,
        v1_in_d1: d1_dim.map(|k| an.v1 < k),
    })
}

/// Classify a structured Riemannian map: how J (or phi) on the target moves
/// the range distribution relative to the range/range-perp split.
pub fn classify_map<S: Real>(
    prob: &RMapProblem<S>,
    ma: &MapAnalysis<S>,
    d1_dim: Option<usize>,
    seed: u64,
) -> Result<StructureClass<S>> {
    use crate::chart::Structure;
    let q = &ma.image;
    let (jmat, xi, eta): (crate::linalg::Mat<S>, Option<Vector<S>>, Option<Vector<S>>) =
        match &prob.target.structure {
            Structure::Complex { .. } => (prob.target.j_at(q)?, None, None),
            Structure::Contact { .. } => {
                let (phi, xi, eta) = prob.target.contact_at(q)?;
                (phi, Some(xi), Some(eta))
            }
            Structure::None => {
                return Err(Error::StructureMissing(
                    "structured classification requires J or phi on the target".into(),
                ))
            }
        };
    let g2 = ma.g2.clone();
    let j_of = move |v: &Vector<S>| jmat.matvec(v);
    let inner = {
        let g = g2.clone();
        move |a: &Vector<S>, b: &Vector<S>| g.inner(a, b)
    };
    let to_range = {
        let g = g2.clone();
        let f = ma.range.clone();
        move |v: &Vector<S>| project(v, &f, &g)
    };
    let to_perp = {
        let g = g2.clone();
        let f = ma.range_perp.clone();
        move |v: &Vector<S>| project(v, &f, &g)
    };
    let mut rng = Rng::new(seed);
    // The distribution under classification is the range; its "inside" part
    // (the q role of classify_span) is the range projection, so the slant
    // cosine is the range-part ratio per the map-side convention.
    let whole = classify_span(
        &j_of,
        &inner,
        &ma.range.vectors,
        &to_range,
        &to_perp,
        &mut rng,
        64,
    );
    let parts = d1_dim.and_then(|k| {
        if k == 0 || k >= ma.r {
            return None;
        }
        let d1: Vec<Vector<S>> = ma.range.vectors[..k].to_vec();
        let d2: Vec<Vector<S>> = ma.range.vectors[k..].to_vec();
        let k1 = classify_span(&j_of, &inner, &d1, &to_range, &to_perp, &mut rng, 64);
        let k2 = classify_span(&j_of, &inner, &d2, &to_range, &to_perp, &mut rng, 64);
        Some((k1, k2))
    });
    let (kind, theta, slant_deviation) = combine_kinds(whole, parts);

    // |P F_* h1|^2 = sum_{j != 1} g2(J F_* h1, F_* h_j)^2.
    let mut pfx_sq = S::zero();
    {
        let jf = j_of(&ma.range.vectors[ma.h1]);
        for (j, fj) in ma.range.vectors.iter().enumerate() {
            if j == ma.h1 {
                continue;
            }
            let c = inner(&jf, fj);
            pfx_sq += c * c;
        }
    }
    let (xi_position, eta_fx_sq) = match (xi, eta) {
        (Some(xiv), Some(etav)) => {
            let rpart = to_range(&xiv);
            let ppart = to_perp(&xiv);
            let rn = inner(&rpart, &rpart);
            let pn = inner(&ppart, &ppart);
            let tol = S::of(1e-8);
            let pos = if pn <= tol {
                XiPosition::Vertical // xi in range: plays the "vertical" slot
            } else if rn <= tol {
                XiPosition::Horizontal // xi in range-perp
            } else {
                return Err(Error::StructureMissing(
                    "Reeb field is neither in the range nor its complement".into(),
                ));
            };
            let e = etav.dot(&ma.range.vectors[ma.h1]);
            (pos, e * e)
        }
        _ => (XiPosition::NotApplicable, S::zero()),
    };

    Ok(StructureClass {
        kind,
        theta,
        slant_deviation,
        p_sq: S::zero(),
        ph1_sq: pfx_sq,
        qv1_sq: S::zero(),
        xi_position,
        eta_v1_sq: S::zero(),
        eta_h1_sq: eta_fx_sq,
        d1_dim,
        v1_in_d1: d1_dim.map(|k| ma.h1 < k),
    })
}

// ---------------------------------------------------------------------------
// Space-form submersion bounds
// ---------------------------------------------------------------------------

/// The three bounds for a submersion whose source is a generalized complex
/// space form, with the model curvature constants on the right-hand side.
pub fn verify_cri_gcsf<S: Real>(
    an: &SubmersionAnalysis<S>,
    cls: &StructureClass<S>,
    spec: &SpaceFormSpec<S>,
) -> Result<Vec<InequalityVerdict<S>>> {
    if !spec.kind.is_complex_family() {
        return Err(Error::UnsupportedClass(format!(
            "CRI-GCSF needs a complex-family space form, got {:?}",
            spec.kind
        )));
    }
    let nf = S::of(an.n as f64);
    let rf = S::of(an.r as f64);
    let three = S::of(3.0);
    let c_v = spec.c1 * (nf - S::one()) + three * spec.c2 * cls.qv1_sq;
    let c_h = spec.c1 * (rf - S::one()) + three * spec.c2 * cls.ph1_sq;
    let c_vh = spec.c1 * (nf * rf + nf + rf - S::of(2.0))
        + three * spec.c2 * (cls.p_sq + cls.ph1_sq + cls.qv1_sq);
    Ok(spaceform_triple(an, THM_CRI_GCSF, c_v, c_h, c_vh))
}

/// The three bounds for a generalized Sasakian source, branch chosen by the
/// Reeb position.
pub fn verify_cri_gssf<S: Real>(
    an: &SubmersionAnalysis<S>,
    cls: &StructureClass<S>,
    spec: &SpaceFormSpec<S>,
) -> Result<Vec<InequalityVerdict<S>>> {
    if !spec.kind.is_contact_family() {
        return Err(Error::UnsupportedClass(format!(
            "CRI-GSSF needs a contact-family space form, got {:?}",
            spec.kind
        )));
    }
    let nf = S::of(an.n as f64);
    let rf = S::of(an.r as f64);
    let three = S::of(3.0);
    let (c_v, c_h, c_vh, branch) = match cls.xi_position {
        XiPosition::Vertical => {
            let c_v = spec.c1 * (nf - S::one()) + three * spec.c2 * cls.qv1_sq
                - spec.c3 * (S::one() + (nf - S::of(2.0)) * cls.eta_v1_sq);
            let c_h = spec.c1 * (rf - S::one()) + three * spec.c2 * cls.ph1_sq;
            let c_vh = spec.c1 * (nf * rf + nf + rf - S::of(2.0))
                + three * spec.c2 * (cls.p_sq + cls.ph1_sq + cls.qv1_sq)
                - spec.c3 * (rf + S::one() + (nf - S::of(2.0)) * cls.eta_v1_sq);
            (c_v, c_h, c_vh, "xi vertical")
        }
        XiPosition::Horizontal => {
            let c_v = spec.c1 * (nf - S::one()) + three * spec.c2 * cls.qv1_sq;
            let c_h = spec.c1 * (rf - S::one()) + three * spec.c2 * cls.ph1_sq
                - spec.c3 * (S::one() + (rf - S::of(2.0)) * cls.eta_h1_sq);
            let c_vh = spec.c1 * (nf * rf + nf + rf - S::of(2.0))
                + three * spec.c2 * (cls.p_sq + cls.ph1_sq + cls.qv1_sq)
                - spec.c3 * (nf + S::one() + (rf - S::of(2.0)) * cls.eta_h1_sq);
            (c_v, c_h, c_vh, "xi horizontal")
        }
        XiPosition::NotApplicable => {
            return Err(Error::StructureMissing(
                "CRI-GSSF needs the Reeb position (vertical or horizontal)".into(),
            ))
        }
    };
    let mut verdicts = spaceform_triple(an, THM_CRI_GSSF, c_v, c_h, c_vh);
    for v in &mut verdicts {
        v.notes.push(format!("branch: {branch}"));
    }
    Ok(verdicts)
}

/// Assemble the (vertical, horizontal, combined) verdicts from model
/// curvature constants.
fn spaceform_triple<S: Real>(
    an: &SubmersionAnalysis<S>,
    theorem_id: &str,
    c_v: S,
    c_h: S,
    c_vh: S,
) -> Vec<InequalityVerdict<S>> {
    let s23 = S::of(an.sign_profile.s23 as f64);
    let n2 = S::of((an.n * an.n) as f64);
    let t_conds = an.t_equality_conditions(cond_tol(an.max_t_abs()));
    let a_conds = an.a_equality_conditions(cond_tol(an.max_a_abs()));

    let rhs_v = c_v - s23 * S::of(0.25) * n2 * an.h_norm_sq;
    let mut v_notes = vec![format!(
        "model identity residual: {:?}",
        (an.ric_v_m1 - c_v).abs().as_f64()
    )];
    if an.sign_profile.s23 < 0 {
        let raw = c_v - S::of(0.25) * n2 * an.h_norm_sq;
        v_notes.push(format!("printed-convention rhs (>=): {:?}", raw.as_f64()));
    }
    let v1 = make_verdict(
        theorem_id,
        Some("vertical".into()),
        &an.point,
        an.ric_v_ker,
        rhs_v,
        dir_from_sign(an.sign_profile.s23),
        Some(t_conds),
        v_notes,
    );
    let v2 = make_verdict(
        theorem_id,
        Some("horizontal".into()),
        &an.point,
        an.ric_h_perp,
        c_h,
        if an.sign_profile.s24 >= 0 { Direction::Le } else { Direction::Ge },
        Some(a_conds),
        vec![format!(
            "model identity residual: {:?}",
            (an.ric_h_m1 - c_h).abs().as_f64()
        )],
    );
    let rhs_vh = gfcrvh_rhs(an, c_vh);
    let v3 = make_verdict(
        theorem_id,
        Some("vertical+horizontal".into()),
        &an.point,
        an.ric_v_ker + an.ric_h_perp,
        rhs_vh,
        dir_from_sign(an.sign_profile.s23),
        Some(t_conds),
        vec![format!(
            "model identity residual: {:?}",
            (an.ric_v_m1 + an.ric_h_m1 + an.mixed_sum - c_vh).abs().as_f64()
        )],
    );
    vec![v1, v2, v3]
}

// ---------------------------------------------------------------------------
// Structured-submersion constants
// ---------------------------------------------------------------------------

/// Model curvature constants (C_V, C_H, C_VH) for the structured classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuredConstants<S> {
    pub c_v: S,
    pub c_h: S,
    pub c_vh: S,
}

/// Class-specific right-hand-side constants of the three structured bounds.
///
/// Complex family: stated for a complex space form M(c) (c1 = c2 = c/4).
/// Contact family: stated for a generalized Sasakian form (c1, c2, c3) with
/// branches by Reeb position. Mixed classes dispatch on whether the
/// distinguished vector sits in D1 or D2.
#[allow(clippy::too_many_arguments)]
pub fn structured_submersion_rhs<S: Real>(
    cls: &StructureClass<S>,
    spec: &SpaceFormSpec<S>,
    n: usize,
    r: usize,
) -> Result<StructuredConstants<S>> {
    if cls.kind == StructureKind::Generic {
        return Err(Error::UnsupportedClass("generic class has no structured constants".into()));
    }
    let theta = cls.theta;
    let in_d1 = cls.v1_in_d1.unwrap_or(true);
    // Effective pure class seen from the distinguished vertical vector.
    let effective: (&str, Option<S>) = match cls.kind {
        StructureKind::Invariant => ("inv", None),
        StructureKind::AntiInvariant => ("anti", None),
        StructureKind::Slant => ("slant", theta),
        StructureKind::SemiInvariant => {
            if in_d1 {
                ("inv", None)
            } else {
                ("anti", None)
            }
        }
        StructureKind::SemiSlant => {
            if in_d1 {
                ("inv", None)
            } else {
                ("slant", theta)
            }
        }
        StructureKind::HemiSlant => {
            if in_d1 {
                ("anti", None)
            } else {
                ("slant", theta)
            }
        }
        StructureKind::Generic => unreachable!(),
    };
    let nf = S::of(n as f64);
    let rf = S::of(r as f64);
    let three = S::of(3.0);
    let (cos2, sin2) = match effective {
        ("inv", _) => (S::one(), S::zero()),
        ("anti", _) => (S::zero(), S::one()),
        (_, Some(t)) => {
            let c = t.cos();
            (c * c, S::one() - c * c)
        }
        _ => return Err(Error::UnsupportedClass("slant class without an angle".into())),
    };

    if spec.kind.is_complex_family() {
        if spec.kind != SpaceFormKind::Complex {
            return Err(Error::UnsupportedClass(
                "structured complex-family constants are stated for a complex space form M(c)"
                    .into(),
            ));
        }
        let c4 = spec.c / S::of(4.0);
        let tc4 = three * c4;
        let c_v = c4 * (nf - S::one()) + tc4 * cos2;
        let c_h = c4 * (rf - S::one()) + tc4 * cls.ph1_sq;
        // invariant: {1 + |Ph1|^2}; anti: {n + |Ph1|^2};
        // slant: {n sin^2 t + |Ph1|^2 + cos^2 t}
        let vh_extra = match effective.0 {
            "inv" => S::one() + cls.ph1_sq,
            "anti" => nf + cls.ph1_sq,
            _ => nf * sin2 + cls.ph1_sq + cos2,
        };
        let c_vh = c4 * (nf * rf + nf + rf - S::of(2.0)) + tc4 * vh_extra;
        return Ok(StructuredConstants { c_v, c_h, c_vh });
    }

    if !spec.kind.is_contact_family() {
        return Err(Error::UnsupportedClass("structured constants need J or phi".into()));
    }
    let (c1, c2, c3) = (spec.c1, spec.c2, spec.c3);
    let ev2 = cls.eta_v1_sq;
    let eh2 = cls.eta_h1_sq;
    match cls.xi_position {
        XiPosition::Vertical => {
            let c_v = match effective.0 {
                "inv" => {
                    c1 * (nf - S::one()) + three * c2 * (S::one() - ev2)
                        - c3 * (S::one() + (nf - S::of(2.0)) * ev2)
                }
                "anti" => c1 * (nf - S::one()) - c3 * (S::one() + (nf - S::of(2.0)) * ev2),
                _ => {
                    c1 * (nf - S::one()) + three * c2 * (S::one() - ev2) * cos2
                        - c3 * (S::one() + (nf - S::of(2.0)) * ev2)
                }
            };
            let c_h = c1 * (rf - S::one()) + three * c2 * cls.ph1_sq;
            let vh_extra = match effective.0 {
                "inv" => three * c2 * (cls.ph1_sq + (S::one() - ev2)),
                "anti" => three * c2 * (nf - S::one() + cls.ph1_sq),
                _ => {
                    three
                        * c2
                        * ((nf - S::one()) * sin2 + cls.ph1_sq + (S::one() - ev2) * cos2)
                }
            };
            let c_vh = c1 * (nf * rf + nf + rf - S::of(2.0)) + vh_extra
                - c3 * (rf + S::one() + (nf - S::of(2.0)) * ev2);
            Ok(StructuredConstants { c_v, c_h, c_vh })
        }
        XiPosition::Horizontal => {
            let c_v = match effective.0 {
                "inv" => c1 * (nf - S::one()) + three * c2,
                "anti" => c1 * (nf - S::one()),
                _ => c1 * (nf - S::one()) + three * c2 * cos2,
            };
            let c_h = c1 * (rf - S::one()) + three * c2 * cls.ph1_sq
                - c3 * (S::one() + (rf - S::of(2.0)) * eh2);
            let vh_extra = match effective.0 {
                "inv" => three * c2 * (S::one() + cls.ph1_sq),
                "anti" => three * c2 * (nf - S::one() + cls.ph1_sq),
                _ => three * c2 * ((nf - S::one()) * sin2 + cls.ph1_sq + cos2),
            };
            let c_vh = c1 * (nf * rf + nf + rf - S::of(2.0)) + vh_extra
                - c3 * (nf + S::one() + (rf - S::of(2.0)) * eh2);
            Ok(StructuredConstants { c_v, c_h, c_vh })
        }
        XiPosition::NotApplicable => Err(Error::StructureMissing(
            "contact structured constants need the Reeb position".into(),
        )),
    }
}

/// Verdicts for the structured-submersion theorems.
pub fn verify_struct_sub<S: Real>(
    an: &SubmersionAnalysis<S>,
    cls: &StructureClass<S>,
    spec: &SpaceFormSpec<S>,
) -> Result<Vec<InequalityVerdict<S>>> {
    let consts = structured_submersion_rhs(cls, spec, an.n, an.r)?;
    let mut verdicts = spaceform_triple(an, THM_STRUCT_SUB, consts.c_v, consts.c_h, consts.c_vh);
    for v in &mut verdicts {
        v.notes.push(format!(
            "class: {}{}",
            cls.kind.as_str(),
            cls.theta.map(|t| format!(" (theta = {:?})", t.as_f64())).unwrap_or_default()
        ));
    }
    Ok(verdicts)
}

// ---------------------------------------------------------------------------
// Riemannian-map bounds
// ---------------------------------------------------------------------------

/// Chen-Ricci bound for a Riemannian map:
/// Ric^H(X) vs Ric^R(F_* X) + s * |trace B|^2 / 4.
pub fn verify_rm_cri<S: Real>(ma: &MapAnalysis<S>) -> InequalityVerdict<S> {
    let s = S::of(ma.gauss_sign as f64);
    let lhs = ma.ric_h;
    let rhs = ma.ric_r + s * S::of(0.25) * ma.norm_trace_b_sq;
    let conds = ma.b_equality_conditions(cond_tol(ma.max_b_abs()));
    let mut notes = vec![];
    // The identical-for-all-X criterion, reported alongside.
    let all_x = rm_identical_equality(ma);
    notes.push(format!("identical-for-all-X condition: {all_x}"));
    make_verdict(
        THM_RM_CRI,
        None,
        &ma.point,
        lhs,
        rhs,
        if ma.gauss_sign >= 0 { Direction::Le } else { Direction::Ge },
        Some(conds),
        notes,
    )
}

fn rm_identical_equality<S: Real>(ma: &MapAnalysis<S>) -> bool {
    let tol = cond_tol(ma.max_b_abs());
    if ma.max_b_abs() <= tol {
        return true; // B = 0
    }
    if ma.r != 2 {
        return false;
    }
    for alpha in 0..ma.n_perp() {
        if (ma.b(0, 0, alpha) - ma.b(1, 1, alpha)).abs() > tol {
            return false;
        }
    }
    true
}

/// Frame-search outcome for the improved bound's equality template.
#[derive(Debug, Clone)]
pub struct EqualityPattern<S> {
    pub mu: Option<S>,
    pub matched: bool,
    pub detail: String,
}

/// Improved Chen-Ricci bound:
/// Ric^H(X) vs Ric^R(F_* X) + s * (r-1)/(4r) |trace B|^2.
pub fn verify_rm_icri<S: Real>(ma: &MapAnalysis<S>) -> (InequalityVerdict<S>, EqualityPattern<S>) {
    let s = S::of(ma.gauss_sign as f64);
    let r = ma.r;
    let w = S::of((r as f64 - 1.0) / (4.0 * r as f64));
    let lhs = ma.ric_h;
    let rhs = ma.ric_r + s * w * ma.norm_trace_b_sq;
    let pattern = fit_equality_pattern(ma);
    let mut notes = vec![];
    let conditions = if r < 2 {
        notes.push("degenerate: rank 1, equality classification not applicable".into());
        None
    } else {
        Some(pattern.matched)
    };
    notes.push(format!("equality pattern: {}", pattern.detail));
    let verdict = make_verdict(
        THM_RM_ICRI,
        None,
        &ma.point,
        lhs,
        rhs,
        if ma.gauss_sign >= 0 { Direction::Le } else { Direction::Ge },
        conditions,
        notes,
    );
    (verdict, pattern)
}

/// Fit the equality template of the improved bound: for some rotation of the
/// horizontal 2-frame and some orthonormal normal directions,
/// B(h1,h1) = 3 mu V1, B(h2,h2) = mu V1, B(h1,h2) = mu V2.
///
/// The first normal direction is pinned by the (rotation-invariant) trace;
/// the horizontal angle is searched on a 64-point grid and refined by
/// golden-section.
pub fn fit_equality_pattern<S: Real>(ma: &MapAnalysis<S>) -> EqualityPattern<S> {
    fit_pattern_from_components(&ma.b_comp, ma.r, ma.n_perp())
}

/// Template fit on raw components B_ij^alpha (flattened [i][j][alpha]).
pub fn fit_pattern_from_components<S: Real>(
    b_comp: &[S],
    r: usize,
    np: usize,
) -> EqualityPattern<S> {
    let max_b = b_comp.iter().fold(S::zero(), |m, x| m.max(x.abs()));
    let scale = S::one() + max_b;
    let tol = S::of(1e-6) * scale;
    if max_b <= tol {
        return EqualityPattern {
            mu: Some(S::zero()),
            matched: true,
            detail: "B = 0".into(),
        };
    }
    if r != 2 {
        return EqualityPattern {
            mu: None,
            matched: false,
            detail: format!("rank {r} != 2 with B != 0"),
        };
    }
    // Normal components of B in the range-perp frame.
    let b = |i: usize, j: usize| -> Vec<S> {
        (0..np).map(|a| b_comp[(i * r + j) * np + a]).collect()
    };
    let b00 = b(0, 0);
    let b01 = b(0, 1);
    let b11 = b(1, 1);
    // trace direction: e1 = trace / |trace| (frame-rotation invariant)
    let trace: Vec<S> = b00.iter().zip(&b11).map(|(x, y)| *x + *y).collect();
    let trace_norm = norm_slice(&trace);
    if trace_norm <= tol {
        return EqualityPattern {
            mu: None,
            matched: false,
            detail: "trace B vanishes but B does not".into(),
        };
    }
    let e1: Vec<S> = trace.iter().map(|x| *x / trace_norm).collect();

    let residual_at = |angle: S| -> (S, S) {
        let (sn, cs) = angle.sin_cos();
        // rotated components: h1' = c h1 + s h2, h2' = -s h1 + c h2
        let rot = |i: usize, j: usize| -> Vec<S> {
            let (ri, rj) = (rot_coeffs(i, cs, sn), rot_coeffs(j, cs, sn));
            (0..np)
                .map(|a| {
                    ri.0 * rj.0 * b00[a]
                        + (ri.0 * rj.1 + ri.1 * rj.0) * b01[a]
                        + ri.1 * rj.1 * b11[a]
                })
                .collect()
        };
        let b00r = rot(0, 0);
        let b01r = rot(0, 1);
        let b11r = rot(1, 1);
        let d11 = dot_slice(&b00r, &e1);
        let d22 = dot_slice(&b11r, &e1);
        let d12 = dot_slice(&b01r, &e1);
        // second normal direction: unit part of B(h1,h2) orthogonal to e1
        let mut p12: Vec<S> = b01r.iter().zip(&e1).map(|(x, e)| *x - d12 * *e).collect();
        let p12n = norm_slice(&p12);
        let has_e2 = np >= 2 && p12n > S::of(1e-12) * scale;
        if has_e2 {
            for x in &mut p12 {
                *x /= p12n;
            }
        }
        let off12 = if has_e2 { p12n } else { S::zero() };
        // least-squares mu over the template weights (3,1,2)
        let mu = (S::of(3.0) * d11 + d22 + S::of(2.0) * off12) / S::of(12.0);
        let mut res = (d11 - S::of(3.0) * mu) * (d11 - S::of(3.0) * mu)
            + (d22 - mu) * (d22 - mu)
            + S::of(2.0) * (off12 - mu) * (off12 - mu)
            + S::of(2.0) * d12 * d12;
        // components of the diagonal blocks off e1 (and off e2) must vanish
        res += off_template_residual(&b00r, &e1, has_e2.then_some(&p12));
        res += off_template_residual(&b11r, &e1, has_e2.then_some(&p12));
        if has_e2 {
            // B(h1,h2) may live only along e2
            let mut extra = S::zero();
            for a in 0..np {
                let v = b01r[a] - d12 * e1[a] - off12 * p12[a];
                extra += v * v;
            }
            res += S::of(2.0) * extra;
        }
        (res, mu)
    };

    // 64-point grid, then golden-section on the best cell.
    let pi = S::of(std::f64::consts::PI);
    let grid = 64usize;
    let mut best = (S::infinity(), S::zero());
    for k in 0..grid {
        let a = pi * S::of(k as f64) / S::of(grid as f64);
        let (res, _) = residual_at(a);
        if res < best.0 {
            best = (res, a);
        }
    }
    let cell = pi / S::of(grid as f64);
    let (mut lo, mut hi) = (best.1 - cell, best.1 + cell);
    let gr = S::of(0.618_033_988_749_894_9);
    let mut x1 = hi - gr * (hi - lo);
    let mut x2 = lo + gr * (hi - lo);
    let mut f1 = residual_at(x1).0;
    let mut f2 = residual_at(x2).0;
    for _ in 0..90 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = residual_at(x1).0;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = residual_at(x2).0;
        }
        if hi - lo < S::of(1e-13) {
            break;
        }
    }
    let a_best = (lo + hi) * S::of(0.5);
    let (res, mu) = residual_at(a_best);
    let matched = res.sqrt() <= tol;
    EqualityPattern {
        mu: matched.then_some(mu),
        matched,
        detail: if matched {
            format!("matched at frame angle {:?} with mu = {:?}", a_best.as_f64(), mu.as_f64())
        } else {
            format!("best frame residual {:?} exceeds tolerance", res.sqrt().as_f64())
        },
    }
}

fn rot_coeffs<S: Real>(i: usize, c: S, s: S) -> (S, S) {
    // coefficients of h'_i in (h1, h2)
    if i == 0 {
        (c, s)
    } else {
        (-s, c)
    }
}

fn dot_slice<S: Real>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |s, (x, y)| s + *x * *y)
}

fn norm_slice<S: Real>(a: &[S]) -> S {
    dot_slice(a, a).max(S::zero()).sqrt()
}

fn off_template_residual<S: Real>(bvec: &[S], e1: &[S], e2: Option<&Vec<S>>) -> S {
    let d1 = dot_slice(bvec, e1);
    let mut res = S::zero();
    for (a, x) in bvec.iter().enumerate() {
        let mut v = *x - d1 * e1[a];
        if let Some(e2) = e2 {
            v -= dot_slice(bvec, e2) * e2[a];
        }
        res += v * v;
    }
    // diagonal blocks must not touch e2 either
    if let Some(e2) = e2 {
        let d2 = dot_slice(bvec, e2);
        res += d2 * d2;
    }
    res
}

// ---------------------------------------------------------------------------
// Corollary right-hand sides (map case, Tables 2/3 rows and structured forms)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct CorollaryInputs<S> {
    pub r: usize,
    /// |P F_* X|^2
    pub pfx_sq: S,
    /// eta(F_* X)^2
    pub eta_fx_sq: S,
    /// Reeb field inside the range (as opposed to the range complement).
    pub xi_in_range: bool,
    pub improved: bool,
    pub trace_b_sq: S,
}

fn trace_weight<S: Real>(r: usize, improved: bool) -> S {
    if improved {
        S::of((r as f64 - 1.0) / (4.0 * r as f64))
    } else {
        S::of(0.25)
    }
}

/// Generalized evaluator: the bound constant for a generalized complex or
/// generalized Sasakian target with coefficients (c1, c2[, c3]).
pub fn generalized_map_rhs<S: Real>(spec: &SpaceFormSpec<S>, inp: &CorollaryInputs<S>) -> S {
    let rf = S::of(inp.r as f64);
    let w = trace_weight::<S>(inp.r, inp.improved);
    let base = (rf - S::one()) * spec.c1 + S::of(3.0) * spec.c2 * inp.pfx_sq + w * inp.trace_b_sq;
    if spec.kind.is_contact_family() && inp.xi_in_range {
        let t_eta = (rf - S::of(2.0)) * inp.eta_fx_sq;
        base - (S::one() + t_eta) * spec.c3
    } else {
        base
    }
}

/// Closed-form bound constants for the named Table rows.
#[allow(clippy::too_many_arguments)]
pub fn corollary_rhs<S: Real>(
    kind: SpaceFormKind,
    c: S,
    alpha: S,
    inp: &CorollaryInputs<S>,
) -> S {
    let rf = S::of(inp.r as f64);
    let w = trace_weight::<S>(inp.r, inp.improved);
    let four = S::of(4.0);
    let t_eta = (rf - S::of(2.0)) * inp.eta_fx_sq;
    let tr = w * inp.trace_b_sq;
    match kind {
        SpaceFormKind::Real => (rf - S::one()) * c + tr,
        SpaceFormKind::Complex => {
            (rf - S::one()) * c / four + S::of(3.0) * c / four * inp.pfx_sq + tr
        }
        SpaceFormKind::RealKahler => {
            (rf - S::one()) * (c + S::of(3.0) * alpha) / four
                + S::of(3.0) * (c - alpha) / four * inp.pfx_sq
                + tr
        }
        SpaceFormKind::Sasakian => {
            let t = (rf - S::one()) * (c + S::of(3.0)) / four
                + S::of(3.0) * (c - S::one()) / four * inp.pfx_sq
                + tr;
            if inp.xi_in_range {
                t - (S::one() + t_eta) * (c - S::one()) / four
            } else {
                t
            }
        }
        SpaceFormKind::Kenmotsu => {
            let t = (rf - S::one()) * (c - S::of(3.0)) / four
                + S::of(3.0) * (c + S::one()) / four * inp.pfx_sq
                + tr;
            if inp.xi_in_range {
                t - (S::one() + t_eta) * (c + S::one()) / four
            } else {
                t
            }
        }
        SpaceFormKind::Cosymplectic => {
            let t = (rf - S::one()) * c / four + S::of(3.0) * c / four * inp.pfx_sq + tr;
            if inp.xi_in_range {
                t - (S::one() + t_eta) * c / four
            } else {
                t
            }
        }
        SpaceFormKind::CAlpha => {
            let a2 = alpha * alpha;
            let t = (rf - S::one()) * (c + S::of(3.0) * a2) / four
                + S::of(3.0) * (c - a2) / four * inp.pfx_sq
                + tr;
            if inp.xi_in_range {
                t - (S::one() + t_eta) * (c - a2) / four
            } else {
                t
            }
        }
        SpaceFormKind::GeneralizedComplex | SpaceFormKind::GeneralizedSasakian => {
            panic!("use generalized_map_rhs for generalized kinds")
        }
    }
}

/// Structured-map bound constant for a complex space form M(c) target:
/// invariant T_I, anti-invariant T_AI, slant T_AI + 3c/4 cos^2 theta.
pub fn structured_map_rhs_complex<S: Real>(
    kind: StructureKind,
    theta: Option<S>,
    in_d1: bool,
    c: S,
    inp: &CorollaryInputs<S>,
) -> Result<S> {
    let rf = S::of(inp.r as f64);
    let w = trace_weight::<S>(inp.r, inp.improved);
    let four = S::of(4.0);
    let t_ai = (rf - S::one()) * c / four + w * inp.trace_b_sq;
    let t_i = t_ai + S::of(3.0) * c / four;
    let slant = |t: S| {
        let ct = t.cos();
        t_ai + S::of(3.0) * c / four * ct * ct
    };
    Ok(match kind {
        StructureKind::Invariant => t_i,
        StructureKind::AntiInvariant => t_ai,
        StructureKind::Slant => {
            slant(theta.ok_or_else(|| Error::UnsupportedClass("slant without angle".into()))?)
        }
        StructureKind::SemiInvariant => {
            if in_d1 {
                t_i
            } else {
                t_ai
            }
        }
        StructureKind::SemiSlant => {
            if in_d1 {
                t_i
            } else {
                slant(theta.ok_or_else(|| Error::UnsupportedClass("slant without angle".into()))?)
            }
        }
        StructureKind::HemiSlant => {
            if in_d1 {
                t_ai
            } else {
                slant(theta.ok_or_else(|| Error::UnsupportedClass("slant without angle".into()))?)
            }
        }
        StructureKind::Generic => {
            return Err(Error::UnsupportedClass("generic class has no structured constant".into()))
        }
    })
}

/// Structured-map bound constant for a generalized Sasakian target.
pub fn structured_map_rhs_contact<S: Real>(
    kind: StructureKind,
    theta: Option<S>,
    in_d1: bool,
    spec: &SpaceFormSpec<S>,
    inp: &CorollaryInputs<S>,
) -> Result<S> {
    let rf = S::of(inp.r as f64);
    let w = trace_weight::<S>(inp.r, inp.improved);
    let three = S::of(3.0);
    let base = (rf - S::one()) * spec.c1 + w * inp.trace_b_sq;
    let t_eta = (rf - S::of(2.0)) * inp.eta_fx_sq;
    let xi_term = (S::one() + t_eta) * spec.c3;
    let cos2 = |t: S| {
        let c = t.cos();
        c * c
    };
    let need_theta =
        || theta.ok_or_else(|| Error::UnsupportedClass("slant without angle".into()));
    let value = |effective: &str| -> Result<S> {
        Ok(match (effective, inp.xi_in_range) {
            ("inv", false) => base + three * spec.c2,
            ("inv", true) => {
                base + three * spec.c2 * (S::one() - inp.eta_fx_sq) - xi_term
            }
            ("anti", false) => base,
            ("anti", true) => base - xi_term,
            ("slant", false) => base + three * spec.c2 * cos2(need_theta()?),
            ("slant", true) => {
                base + three * spec.c2 * (S::one() - inp.eta_fx_sq) * cos2(need_theta()?)
                    - xi_term
            }
            _ => unreachable!(),
        })
    };
    match kind {
        StructureKind::Invariant => value("inv"),
        StructureKind::AntiInvariant => value("anti"),
        StructureKind::Slant => value("slant"),
        StructureKind::SemiInvariant => value(if in_d1 { "inv" } else { "anti" }),
        StructureKind::SemiSlant => value(if in_d1 { "inv" } else { "slant" }),
        StructureKind::HemiSlant => value(if in_d1 { "anti" } else { "slant" }),
        StructureKind::Generic => {
            Err(Error::UnsupportedClass("generic class has no structured constant".into()))
        }
    }
}

/// Corollary verdict: lhs = Ric^H against the bound constant of a space-form
/// row (named rows via their closed forms, generalized kinds via the
/// (c1, c2[, c3]) evaluator).
pub fn verify_corollary<S: Real>(
    ma: &MapAnalysis<S>,
    spec: &SpaceFormSpec<S>,
    cls: Option<&StructureClass<S>>,
    improved: bool,
) -> InequalityVerdict<S> {
    let (pfx_sq, eta_fx_sq, xi_in_range) = match cls {
        Some(cl) => (cl.ph1_sq, cl.eta_h1_sq, cl.xi_position == XiPosition::Vertical),
        None => (S::zero(), S::zero(), false),
    };
    let s = S::of(ma.gauss_sign as f64);
    let inp = CorollaryInputs {
        r: ma.r,
        pfx_sq,
        eta_fx_sq,
        xi_in_range,
        improved,
        trace_b_sq: s * ma.norm_trace_b_sq,
    };
    let rhs = match spec.kind {
        SpaceFormKind::GeneralizedComplex | SpaceFormKind::GeneralizedSasakian => {
            generalized_map_rhs(spec, &inp)
        }
        kind => corollary_rhs(kind, spec.c, spec.alpha, &inp),
    };
    let theorem = if improved { THM_COR_ICRI } else { THM_COR_CRI };
    let conds = ma.b_equality_conditions(cond_tol(ma.max_b_abs()));
    make_verdict(
        theorem,
        Some(format!("{:?}", spec.kind)),
        &ma.point,
        ma.ric_h,
        rhs,
        if ma.gauss_sign >= 0 { Direction::Le } else { Direction::Ge },
        Some(conds),
        vec![],
    )
}
