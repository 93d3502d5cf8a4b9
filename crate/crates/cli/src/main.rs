//! Command line surface for the contact-surgery invariant engine.
//!
//! Exit codes: 0 on success, 1 on domain errors (undefined d3, infinite
//! order, illegal moves), 2 on usage and parse errors. Identical inputs
//! produce byte-identical reports; `--json` switches every command to a
//! machine-readable rendering of the same information.

use clap::{Parser, Subcommand};
use contact_surgery::diagram::SurgeryDiagram;
use contact_surgery::homology::{H1Element, H1Group};
use contact_surgery::invariants::{
    d3, plane_field_fingerprint, rational_classical, spin_structures, InvariantError,
    KnotInComplement, SpinStructure,
};
use contact_surgery::kirby::{FramedLinkState, Move};
use contact_surgery::lens::{
    d3_determines_gamma_experiment, gamma_collision_witness, integral_obstruction,
    neg_continued_fraction, plamenevskaya_check, search_pairs, tight_structures, CollisionSearch,
    LensSpace, Obstruction, PairCertificate,
};
use contact_surgery::lutz::{lutz_extend, schur_checks, verify_lutz_identities};
use contact_surgery::sample::{random_diagram, random_knot, random_legal_move, rng_from_seed};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "contact-surgery",
    version,
    about = "Invariants of contact (+1)/(-1)-surgery diagrams and lens space obstructions"
)]
struct Cli {
    /// Emit machine-readable JSON with the same information content
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full invariant report: H1, d3, spin structures, Gamma, Euler class
    Invariants { diagram: PathBuf },
    /// First homology in canonical coordinates
    Homology { diagram: PathBuf },
    /// Spin structures as characteristic sublinks
    Spin { diagram: PathBuf },
    /// Gamma invariant per spin structure
    Gamma { diagram: PathBuf },
    /// d3 invariant
    D3 { diagram: PathBuf },
    /// Rational classical invariants of a knot in the complement
    Rational { diagram: PathBuf, knot: PathBuf },
    /// Verify the Lutz twist difference formulas on given data or random cases
    LutzVerify {
        diagram: Option<PathBuf>,
        knot: Option<PathBuf>,
        /// Run this many random verification cases instead of reading files
        #[arg(long)]
        random: Option<usize>,
        /// Seed for the randomized suite
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply a move script to a framed link state (or random legal moves)
    Kirby {
        state: PathBuf,
        moves: Option<PathBuf>,
        /// Apply this many random legal moves instead of a script
        #[arg(long)]
        random: Option<usize>,
        /// Seed for the randomized moves
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tight contact structures on L(p,q) with their fingerprints
    LensTight { p: u64, q: u64 },
    /// Homological obstruction to a single integral surgery between lens spaces
    LensObstruct { p: u64, q: u64, p2: u64, q2: u64 },
    /// The five-condition contact surgery distance criterion for one pair
    LensCheck { p: u64, q: u64, p2: u64, q2: u64 },
    /// Search prime pairs up to the bound and certify them
    LensSearch { bound: u64 },
    /// Search for equal-d3 / distinct-Gamma plane fields on a connected sum
    GammaCollision {
        #[arg(required = true)]
        factors: Vec<u64>,
    },
    /// Test "integral d3 difference iff equal Gamma" on sampled plane fields
    D3GammaExperiment {
        p: u64,
        q: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

enum CliError {
    /// Usage and parse errors, exit code 2.
    Parse(String),
    /// Domain errors, exit code 1.
    Domain(String),
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<contact_surgery::lutz::LutzError> for CliError {
    fn from(e: contact_surgery::lutz::LutzError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<contact_surgery::kirby::KirbyError> for CliError {
    fn from(e: contact_surgery::kirby::KirbyError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<contact_surgery::lens::LensError> for CliError {
    fn from(e: contact_surgery::lens::LensError) -> Self {
        CliError::Parse(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn parse_diagram(path: &Path) -> Result<SurgeryDiagram, CliError> {
    let text = read_file(path)?;
    SurgeryDiagram::from_json_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_knot(path: &Path) -> Result<KnotInComplement, CliError> {
    let text = read_file(path)?;
    KnotInComplement::from_json_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_state(path: &Path) -> Result<FramedLinkState, CliError> {
    let text = read_file(path)?;
    FramedLinkState::from_json_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_moves(path: &Path) -> Result<Vec<Move>, CliError> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn lens_space(p: u64, q: u64) -> Result<LensSpace, CliError> {
    Ok(LensSpace::new(p, q)?)
}

/// Sublink rendered with component ids, e.g. "{c1,c3}".
fn spin_label(d: &SurgeryDiagram, s: &SpinStructure) -> String {
    let ids: Vec<&str> = s
        .indices()
        .into_iter()
        .map(|i| d.components()[i].id.as_str())
        .collect();
    format!("{{{}}}", ids.join(","))
}

fn elem_json(e: &H1Element) -> Value {
    let coords: Vec<String> = e
        .torsion
        .iter()
        .chain(&e.free)
        .map(|c| c.to_string())
        .collect();
    json!({ "coords": coords, "display": e.to_string() })
}

fn group_json(g: &H1Group) -> Value {
    json!({
        "invariant_factors": g.invariant_factors().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "free_rank": g.free_rank(),
        "display": g.to_string(),
    })
}

fn d3_json(v: &contact_surgery::invariants::D3) -> Value {
    json!({
        "value": v.value.to_string(),
        "rank_normalization": v.rank_value.as_ref().map(|r| r.to_string()),
        "free_rank": v.free_rank,
    })
}

fn push_d3_lines(out: &mut String, v: &contact_surgery::invariants::D3) {
    writeln!(out, "d3 = {}", v.value).unwrap();
    if let Some(rank_value) = &v.rank_value {
        writeln!(out, "d3 (rank normalization) = {rank_value}").unwrap();
        writeln!(
            out,
            "warning: degenerate linking matrix (free rank {})",
            v.free_rank
        )
        .unwrap();
    }
}

fn cmd_invariants(path: &Path, as_json: bool) -> Result<String, CliError> {
    let d = parse_diagram(path)?;
    let fp = plane_field_fingerprint(&d)?;
    if as_json {
        let spins: Vec<Value> = fp
            .spins
            .iter()
            .zip(&fp.gammas)
            .map(|(s, g)| {
                json!({
                    "sublink": spin_label(&d, s),
                    "indicator": s.indicator(),
                    "gamma": elem_json(g),
                })
            })
            .collect();
        return Ok(render_json(&json!({
            "components": d.len(),
            "h1": group_json(&fp.h1),
            "d3": d3_json(&fp.d3),
            "spin_structures": spins,
            "euler_class": elem_json(&fp.euler),
        })));
    }
    let mut out = String::new();
    writeln!(out, "components: {}", d.len()).unwrap();
    writeln!(out, "H1 = {}", fp.h1).unwrap();
    push_d3_lines(&mut out, &fp.d3);
    writeln!(out, "spin structures: {}", fp.spins.len()).unwrap();
    for (s, g) in fp.spins.iter().zip(&fp.gammas) {
        writeln!(out, "Gamma[{}] = {g}", spin_label(&d, s)).unwrap();
    }
    writeln!(out, "Euler class = {}", fp.euler).unwrap();
    Ok(out)
}

fn cmd_homology(path: &Path, as_json: bool) -> Result<String, CliError> {
    let d = parse_diagram(path)?;
    let g = d.first_homology();
    let meridians: Vec<H1Element> = (0..d.len())
        .map(|i| {
            let mut coords = vec![0i64; d.len()];
            coords[i] = 1;
            g.class(&coords).expect("dimension matches")
        })
        .collect();
    if as_json {
        let images: Vec<Value> = d
            .components()
            .iter()
            .zip(&meridians)
            .map(|(c, m)| json!({ "id": c.id, "class": elem_json(m) }))
            .collect();
        return Ok(render_json(&json!({
            "h1": group_json(&g),
            "meridians": images,
        })));
    }
    let mut out = String::new();
    writeln!(out, "H1 = {g}").unwrap();
    writeln!(
        out,
        "invariant factors: [{}]",
        g.invariant_factors()
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )
    .unwrap();
    writeln!(out, "free rank: {}", g.free_rank()).unwrap();
    for (c, m) in d.components().iter().zip(&meridians) {
        writeln!(out, "meridian[{}] = {m}", c.id).unwrap();
    }
    Ok(out)
}

fn cmd_spin(path: &Path, as_json: bool) -> Result<String, CliError> {
    let d = parse_diagram(path)?;
    let spins = spin_structures(&d);
    if as_json {
        let list: Vec<Value> = spins
            .iter()
            .map(|s| json!({ "sublink": spin_label(&d, s), "indicator": s.indicator() }))
            .collect();
        return Ok(render_json(&json!({ "spin_structures": list })));
    }
    let mut out = String::new();
    writeln!(out, "spin structures: {}", spins.len()).unwrap();
    for s in &spins {
        writeln!(out, "{}", spin_label(&d, s)).unwrap();
    }
    Ok(out)
}

fn cmd_gamma(path: &Path, as_json: bool) -> Result<String, CliError> {
    let d = parse_diagram(path)?;
    let g = d.first_homology();
    let spins = spin_structures(&d);
    let gammas: Vec<H1Element> = spins
        .iter()
        .map(|s| contact_surgery::invariants::gamma_in(&d, &g, s))
        .collect::<Result<_, _>>()?;
    let euler = g.double(&gammas[0]);
    if as_json {
        let list: Vec<Value> = spins
            .iter()
            .zip(&gammas)
            .map(|(s, e)| json!({ "sublink": spin_label(&d, s), "gamma": elem_json(e) }))
            .collect();
        return Ok(render_json(&json!({
            "h1": group_json(&g),
            "gamma": list,
            "euler_class": elem_json(&euler),
        })));
    }
    let mut out = String::new();
    writeln!(out, "H1 = {g}").unwrap();
    for (s, e) in spins.iter().zip(&gammas) {
        writeln!(out, "Gamma[{}] = {e}", spin_label(&d, s)).unwrap();
    }
    writeln!(out, "Euler class = {euler}").unwrap();
    Ok(out)
}

fn cmd_d3(path: &Path, as_json: bool) -> Result<String, CliError> {
    let d = parse_diagram(path)?;
    let value = d3(&d)?;
    if as_json {
        return Ok(render_json(&d3_json(&value)));
    }
    let mut out = String::new();
    push_d3_lines(&mut out, &value);
    Ok(out)
}

fn cmd_rational(diagram: &Path, knot: &Path, as_json: bool) -> Result<String, CliError> {
    let d = parse_diagram(diagram)?;
    let k = parse_knot(knot)?;
    let rc = rational_classical(&d, &k)?;
    if as_json {
        return Ok(render_json(&json!({
            "order": rc.order.to_string(),
            "tb_q": rc.tb_q.to_string(),
            "rot_q": rc.rot_q.to_string(),
            "sl_q": rc.sl_q.to_string(),
        })));
    }
    let mut out = String::new();
    writeln!(out, "order = {}", rc.order).unwrap();
    writeln!(out, "tb_Q = {}", rc.tb_q).unwrap();
    writeln!(out, "rot_Q = {}", rc.rot_q).unwrap();
    writeln!(out, "sl_Q = {}", rc.sl_q).unwrap();
    Ok(out)
}

fn ok_str(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn lutz_report_json(
    d: &SurgeryDiagram,
    report: &contact_surgery::lutz::LutzIdentityReport,
    schur: &contact_surgery::lutz::SchurReport,
) -> Value {
    json!({
        "schur": {
            "determinant": schur.schur_det.to_string(),
            "determinant_minus_one": schur.schur_det_is_minus_one,
            "signature_base": schur.base_signature,
            "signature_extended": schur.extended_signature,
            "det_base": schur.base_det.to_string(),
            "det_extended": schur.extended_det.to_string(),
            "all_pass": schur.all_pass(),
        },
        "d3_base": report.d3_base.to_string(),
        "d3_extended": report.d3_extended.to_string(),
        "sl_q": report.sl_q.to_string(),
        "d3_residual": report.d3_residual.to_string(),
        "gamma_residuals": report
            .spins
            .iter()
            .zip(&report.gamma_residuals)
            .map(|(s, r)| json!({ "sublink": spin_label(d, s), "residual": elem_json(r) }))
            .collect::<Vec<_>>(),
        "holds": report.holds(),
    })
}

fn cmd_lutz_verify(
    diagram: Option<&Path>,
    knot: Option<&Path>,
    random: Option<usize>,
    seed: u64,
    as_json: bool,
) -> Result<String, CliError> {
    if let Some(cases) = random {
        let mut rng = rng_from_seed(seed);
        for case in 0..cases {
            let d = random_diagram(&mut rng, 4, 3, true);
            let k = random_knot(&mut rng, d.len(), 5, 3);
            let report = verify_lutz_identities(&d, &k)?;
            let schur = schur_checks(&lutz_extend(&d, &k)?)?;
            if !report.holds() || !schur.all_pass() {
                return Err(CliError::Domain(format!(
                    "random case {case} (seed {seed}) violated an identity"
                )));
            }
        }
        if as_json {
            return Ok(render_json(&json!({
                "cases": cases,
                "seed": seed,
                "all_hold": true,
            })));
        }
        return Ok(format!(
            "{cases} random cases (seed {seed}): both Lutz identities hold exactly\n"
        ));
    }

    let (Some(diagram), Some(knot)) = (diagram, knot) else {
        return Err(CliError::Parse(
            "lutz-verify needs DIAGRAM and KNOT files, or --random N".to_string(),
        ));
    };
    let d = parse_diagram(diagram)?;
    let k = parse_knot(knot)?;
    let report = verify_lutz_identities(&d, &k)?;
    let schur = schur_checks(&lutz_extend(&d, &k)?)?;
    if as_json {
        return Ok(render_json(&lutz_report_json(&d, &report, &schur)));
    }
    let mut out = String::new();
    writeln!(
        out,
        "Schur complement determinant = {}: {}",
        schur.schur_det,
        ok_str(schur.schur_det_is_minus_one)
    )
    .unwrap();
    writeln!(
        out,
        "signature base = {}, extended = {}: {}",
        schur.base_signature,
        schur.extended_signature,
        ok_str(schur.signatures_agree)
    )
    .unwrap();
    writeln!(
        out,
        "|det| base = {}, extended = {}: {}",
        schur.base_det.clone(),
        schur.extended_det.clone(),
        ok_str(schur.abs_dets_agree)
    )
    .unwrap();
    writeln!(out, "d3 base = {}", report.d3_base).unwrap();
    writeln!(out, "d3 extended = {}", report.d3_extended).unwrap();
    writeln!(out, "sl_Q = {}", report.sl_q).unwrap();
    writeln!(
        out,
        "d3 residual = {}: {}",
        report.d3_residual,
        ok_str(report.d3_identity_holds())
    )
    .unwrap();
    for (s, r) in report.spins.iter().zip(&report.gamma_residuals) {
        writeln!(
            out,
            "Gamma residual [{}] = {r}: {}",
            spin_label(&d, s),
            ok_str(r.is_zero())
        )
        .unwrap();
    }
    if report.holds() && schur.all_pass() {
        writeln!(out, "verdict: all identities hold").unwrap();
        Ok(out)
    } else {
        Err(CliError::Domain(format!(
            "{out}verdict: identity violated"
        )))
    }
}

fn state_line(prefix: &str, st: &FramedLinkState) -> String {
    let framings: Vec<String> = st.framings().iter().map(|f| f.to_string()).collect();
    let sublink: Vec<String> = st
        .char_sublink()
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then(|| (i + 1).to_string()))
        .collect();
    format!(
        "{prefix}: framings [{}]; sublink {{{}}}\n",
        framings.join(", "),
        sublink.join(",")
    )
}

fn state_json(st: &FramedLinkState) -> Value {
    serde_json::to_value(st).expect("state serializes")
}

fn cmd_kirby(
    state: &Path,
    moves: Option<&Path>,
    random: Option<usize>,
    seed: u64,
    as_json: bool,
) -> Result<String, CliError> {
    let initial = parse_state(state)?;
    let moves: Vec<Move> = match (moves, random) {
        (Some(path), None) => parse_moves(path)?,
        (None, Some(count)) => {
            let mut rng = rng_from_seed(seed);
            let mut st = initial.clone();
            let mut generated = Vec::with_capacity(count);
            for _ in 0..count {
                let mv = random_legal_move(&mut rng, &st, 3);
                st = st.apply(&mv).map_err(CliError::from)?;
                generated.push(mv);
            }
            generated
        }
        _ => {
            return Err(CliError::Parse(
                "kirby needs a MOVES file or --random N".to_string(),
            ))
        }
    };

    let homology = initial.homology_invariants();
    let mut states = vec![initial.clone()];
    let mut current = initial;
    for mv in &moves {
        current = current.apply(mv)?;
        states.push(current.clone());
    }
    let preserved = states.iter().all(|s| s.homology_invariants() == homology);
    let characteristic = states.iter().all(FramedLinkState::is_characteristic);

    if as_json {
        return Ok(render_json(&json!({
            "moves": moves,
            "states": states.iter().map(state_json).collect::<Vec<_>>(),
            "homology_preserved": preserved,
            "characteristic_at_every_step": characteristic,
        })));
    }
    let mut out = String::new();
    out.push_str(&state_line("state 0", &states[0]));
    for (i, mv) in moves.iter().enumerate() {
        writeln!(out, "move {}: {}", i + 1, move_label(mv)).unwrap();
        out.push_str(&state_line(&format!("state {}", i + 1), &states[i + 1]));
    }
    writeln!(out, "homology invariants preserved: {}", ok_str(preserved)).unwrap();
    writeln!(
        out,
        "characteristic at every step: {}",
        ok_str(characteristic)
    )
    .unwrap();
    Ok(out)
}

fn move_label(mv: &Move) -> String {
    match mv {
        Move::BlowUp { eps, w } => format!("blow_up eps={eps} w={w:?}"),
        Move::BlowDown { k } => format!("blow_down k={k}"),
        Move::HandleSlide { i, k, sign } => format!("handle_slide i={i} k={k} sign={sign}"),
        Move::RolfsenTwist { k, n } => format!("rolfsen_twist k={k} n={n}"),
        Move::InverseSlamDunk { n, a } => format!("inverse_slam_dunk n={n} a={a:?}"),
        Move::SlamDunk { k, u } => format!("slam_dunk k={k} u={u}"),
    }
}

fn cmd_lens_tight(p: u64, q: u64, as_json: bool) -> Result<String, CliError> {
    let l = lens_space(p, q)?;
    let diagrams = tight_structures(&l);
    let expansion = if l.is_sphere() {
        Vec::new()
    } else {
        neg_continued_fraction(p, q)?
    };
    let mut entries = Vec::new();
    for d in &diagrams {
        let fp = plane_field_fingerprint(d)?;
        entries.push((d.clone(), fp));
    }
    if as_json {
        let list: Vec<Value> = entries
            .iter()
            .map(|(d, fp)| {
                json!({
                    "rot": d.components().iter().map(|c| c.rot).collect::<Vec<_>>(),
                    "d3": fp.d3.value.to_string(),
                    "gamma": fp
                        .spins
                        .iter()
                        .zip(&fp.gammas)
                        .map(|(s, g)| json!({ "sublink": spin_label(d, s), "gamma": elem_json(g) }))
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        return Ok(render_json(&json!({
            "lens": l.to_string(),
            "expansion": expansion,
            "tight_structures": list,
        })));
    }
    let mut out = String::new();
    writeln!(
        out,
        "{l}: expansion {expansion:?}, {} tight structure(s)",
        diagrams.len()
    )
    .unwrap();
    for (i, (d, fp)) in entries.iter().enumerate() {
        let rots: Vec<String> = d.components().iter().map(|c| c.rot.to_string()).collect();
        write!(out, "tight[{i}]: rot = [{}], d3 = {}", rots.join(", "), fp.d3.value).unwrap();
        for (s, g) in fp.spins.iter().zip(&fp.gammas) {
            write!(out, ", Gamma[{}] = {g}", spin_label(d, s)).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

fn cmd_lens_obstruct(p: u64, q: u64, p2: u64, q2: u64, as_json: bool) -> Result<String, CliError> {
    let a = lens_space(p, q)?;
    let b = lens_space(p2, q2)?;
    let verdict = integral_obstruction(&a, &b);
    let verdict_str = match verdict {
        Obstruction::Obstructed => "obstructed",
        Obstruction::NotObstructed => "not-obstructed",
    };
    if as_json {
        return Ok(render_json(&json!({
            "first": a.to_string(),
            "second": b.to_string(),
            "verdict": verdict_str,
        })));
    }
    Ok(format!("{a} vs {b}: {verdict_str}\n"))
}

fn certificate_line(cert: &PairCertificate) -> String {
    let conds: Vec<&str> = cert
        .conditions
        .iter()
        .map(|&c| if c { "1" } else { "0" })
        .collect();
    format!(
        "{} | {} | {} | not-obstructed",
        cert.first,
        cert.second,
        conds.join(" ")
    )
}

fn certificate_json(cert: &PairCertificate) -> Value {
    json!({
        "first": { "p": cert.first.p(), "q": cert.first.q() },
        "second": { "p": cert.second.p(), "q": cert.second.q() },
        "conditions": cert.conditions,
        "not_obstructed_facts": cert.not_obstructed_facts,
        "obstruction": "not-obstructed",
    })
}

fn cmd_lens_check(p: u64, q: u64, p2: u64, q2: u64, as_json: bool) -> Result<String, CliError> {
    let a = lens_space(p, q)?;
    let b = lens_space(p2, q2)?;
    match plamenevskaya_check(&a, &b) {
        Ok(cert) => {
            if as_json {
                Ok(render_json(&certificate_json(&cert)))
            } else {
                Ok(format!(
                    "{}\ncertificate: contact surgery distance > 1 for all tight structures\n",
                    certificate_line(&cert)
                ))
            }
        }
        Err(failed) => {
            if as_json {
                Ok(render_json(&json!({
                    "first": a.to_string(),
                    "second": b.to_string(),
                    "certificate": false,
                    "failed_conditions": failed.failed,
                })))
            } else {
                let list: Vec<String> = failed.failed.iter().map(|i| i.to_string()).collect();
                Ok(format!(
                    "{a} vs {b}: no certificate (conditions failed: {})\n",
                    list.join(", ")
                ))
            }
        }
    }
}

fn cmd_lens_search(bound: u64, as_json: bool) -> Result<String, CliError> {
    let certificates = search_pairs(bound);
    if as_json {
        return Ok(render_json(&json!({
            "bound": bound,
            "certificates": certificates.iter().map(certificate_json).collect::<Vec<_>>(),
        })));
    }
    let mut out = String::new();
    for cert in &certificates {
        out.push_str(&certificate_line(cert));
        out.push('\n');
    }
    writeln!(out, "total: {} certificate(s)", certificates.len()).unwrap();
    Ok(out)
}

fn cmd_gamma_collision(factors: &[u64], as_json: bool) -> Result<String, CliError> {
    let search = gamma_collision_witness(factors)?;
    let h1_label = if factors.is_empty() {
        "0".to_string()
    } else {
        factors
            .iter()
            .map(|p| format!("Z/{p}"))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    match search {
        CollisionSearch::NoneExists => {
            if as_json {
                Ok(render_json(&json!({
                    "h1": h1_label,
                    "witness": Value::Null,
                    "none_exists": true,
                })))
            } else {
                Ok(format!(
                    "none-exists: d3 determines Gamma on manifolds with H1 = {h1_label}\n"
                ))
            }
        }
        CollisionSearch::Witness(w) => {
            if as_json {
                Ok(render_json(&json!({
                    "h1": h1_label,
                    "none_exists": false,
                    "witness": {
                        "d3": w.d3.to_string(),
                        "spin": w.spin.indicator(),
                        "gamma_first": elem_json(&w.gamma_first),
                        "gamma_second": elem_json(&w.gamma_second),
                        "first": serde_json::to_value(&w.first).expect("diagram serializes"),
                        "second": serde_json::to_value(&w.second).expect("diagram serializes"),
                    },
                })))
            } else {
                let mut out = String::new();
                writeln!(out, "witness on H1 = {h1_label}").unwrap();
                writeln!(out, "shared d3 = {}", w.d3).unwrap();
                writeln!(
                    out,
                    "spin structure {}: Gamma = {} vs {}",
                    w.spin, w.gamma_first, w.gamma_second
                )
                .unwrap();
                let describe = |d: &SurgeryDiagram| {
                    let rots: Vec<String> =
                        d.components().iter().map(|c| c.rot.to_string()).collect();
                    format!("{} component(s), rot [{}]", d.len(), rots.join(", "))
                };
                writeln!(out, "first: {}", describe(&w.first)).unwrap();
                writeln!(out, "second: {}", describe(&w.second)).unwrap();
                Ok(out)
            }
        }
    }
}

fn cmd_experiment(p: u64, q: u64, samples: usize, as_json: bool) -> Result<String, CliError> {
    let l = lens_space(p, q)?;
    let report = d3_determines_gamma_experiment(&l, samples);
    if as_json {
        let counterexamples: Vec<Value> = report
            .counterexamples
            .iter()
            .map(|c| {
                json!({
                    "i": c.i,
                    "j": c.j,
                    "d3_difference": c.d3_difference.to_string(),
                    "difference_integral": c.difference_integral,
                    "gammas_equal": c.gammas_equal,
                })
            })
            .collect();
        return Ok(render_json(&json!({
            "lens": l.to_string(),
            "samples": report.samples.len(),
            "counterexamples": counterexamples,
            "biconditional_holds": report.biconditional_holds(),
        })));
    }
    let mut out = String::new();
    writeln!(
        out,
        "{l}: {} samples, {} counterexample pair(s)",
        report.samples.len(),
        report.counterexamples.len()
    )
    .unwrap();
    for c in report.counterexamples.iter().take(5) {
        writeln!(
            out,
            "counterexample: samples {} and {}: d3 difference {} ({}), Gamma maps {}",
            c.i,
            c.j,
            c.d3_difference,
            if c.difference_integral {
                "integral"
            } else {
                "not integral"
            },
            if c.gammas_equal { "equal" } else { "differ" }
        )
        .unwrap();
    }
    if report.biconditional_holds() {
        writeln!(out, "verdict: integral d3 difference iff equal Gamma, on all pairs").unwrap();
    } else {
        writeln!(out, "verdict: d3 does not determine Gamma here").unwrap();
    }
    Ok(out)
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("valid json");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<String, CliError> {
    let as_json = cli.json;
    match &cli.command {
        Command::Invariants { diagram } => cmd_invariants(diagram, as_json),
        Command::Homology { diagram } => cmd_homology(diagram, as_json),
        Command::Spin { diagram } => cmd_spin(diagram, as_json),
        Command::Gamma { diagram } => cmd_gamma(diagram, as_json),
        Command::D3 { diagram } => cmd_d3(diagram, as_json),
        Command::Rational { diagram, knot } => cmd_rational(diagram, knot, as_json),
        Command::LutzVerify {
            diagram,
            knot,
            random,
            seed,
        } => cmd_lutz_verify(diagram.as_deref(), knot.as_deref(), *random, *seed, as_json),
        Command::Kirby {
            state,
            moves,
            random,
            seed,
        } => cmd_kirby(state, moves.as_deref(), *random, *seed, as_json),
        Command::LensTight { p, q } => cmd_lens_tight(*p, *q, as_json),
        Command::LensObstruct { p, q, p2, q2 } => cmd_lens_obstruct(*p, *q, *p2, *q2, as_json),
        Command::LensCheck { p, q, p2, q2 } => cmd_lens_check(*p, *q, *p2, *q2, as_json),
        Command::LensSearch { bound } => cmd_lens_search(*bound, as_json),
        Command::GammaCollision { factors } => cmd_gamma_collision(factors, as_json),
        Command::D3GammaExperiment { p, q, samples } => cmd_experiment(*p, *q, *samples, as_json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(message)) => {
            eprintln!("{message}");
            ExitCode::from(1)
        }
        Err(CliError::Parse(message)) => {
            eprintln!("{message}");
            ExitCode::from(2)
        }
    }
}
