use std::fmt;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use testspace::corpus;
use testspace::logic::{
    build_logic, canonical_isomorphism, is_algebraic, oa_to_test_space, roundtrip_logic,
    Orthoalgebra,
};
use testspace::metric::{
    chord_for_angle, dot, max_orthogonal_subset_with_pairs, parse_coords, rank_bound_with_pairs,
    sample_frames, tno_radius_with_pairs, Ball, MetricSample, VietorisBasicOpen,
};
use testspace::semiclassical::{
    auto_basis, coverage_radius, extract_semiclassical, hidden_variable_state,
};
use testspace::states::{
    dispersion_free_states_with_cap, gleason_state, is_udf_with_cap, solve_state, verify_state,
    DensityMatrix, ExactState, Feasibility,
};
use testspace::{Error, TestSpace};

use crate::report::{fixed, sci, Report};
use crate::{Cli, Command, ExtractArgs, MetricCommand, OaCommand, StatesArgs};

#[derive(Debug)]
pub enum CliError {
    Io(PathBuf, io::Error),
    Core(Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Core(e) => e.fmt(f),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Outcome = Result<(Report, bool), CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_space(path: &Path) -> Result<TestSpace, CliError> {
    Ok(TestSpace::parse(&read(path)?)?)
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Info { file } => info(file),
        Command::Logic { file, print } => logic(file, *print),
        Command::States(args) => states(args),
        Command::Oa(cmd) => oa(cmd),
        Command::Metric(MetricCommand::Check {
            file,
            coords,
            ortho_tol,
            cap_degrees,
        }) => metric_check(file, coords.as_deref(), *ortho_tol, *cap_degrees),
        Command::SampleFrames {
            dim,
            count,
            seed,
            output,
        } => sample(*dim, *count, *seed, output),
        Command::Extract(args) => extract(args),
        Command::Gen { name } => {
            let mut r = Report::default();
            r.line(corpus::instance(name)?.to_tsp().trim_end());
            Ok((r, false))
        }
    }
}

fn info(file: &Path) -> Outcome {
    let ts = load_space(file)?;
    let mut r = Report::default();
    r.section("info")
        .row("outcomes", ts.outcome_count())
        .row("tests", ts.tests().len())
        .row("rank", ts.rank())
        .row("uniform", ts.is_uniform());
    match ts.enumerate_events() {
        Ok(events) => {
            r.row("events", events.len());
            r.row("algebraic", is_algebraic(&ts)?.0);
        }
        Err(Error::EventCapExceeded { required, .. }) => {
            r.row("events", format!(">{required} subsets, not enumerated"));
        }
        Err(e) => return Err(e.into()),
    }
    r.row("semiclassical", testspace::is_semiclassical(&ts).0)
        .row("redundant_pairs", ts.redundancy().len());
    Ok((r, false))
}

fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn logic(file: &Path, print: bool) -> Outcome {
    let ts = load_space(file)?;
    let mut r = Report::default();
    r.section("logic");
    let (algebraic, violation) = is_algebraic(&ts)?;
    r.row("algebraic", algebraic);
    if let Some(v) = violation {
        r.row("violation", v.describe(&ts));
        return Ok((r, true));
    }
    let logic = build_logic(&ts)?;
    let oa = logic.algebra();
    let prop = oa.check_flags();
    r.row("events", logic.events().len())
        .row("classes", logic.len())
        .row("orthocoherent", prop.orthocoherent)
        .row("osum_is_join", prop.osum_is_join)
        .row("orthomodular", prop.omp)
        .row("flags_agree", prop.flags_agree())
        .row("table_sha256", digest(&oa.to_text()));
    for (name, w) in ["orthocoherent", "osum_is_join", "orthomodular"]
        .iter()
        .zip(&prop.witnesses)
    {
        if let Some(w) = w {
            r.row(&format!("{name}_witness"), w);
        }
    }
    if print {
        r.line(oa.to_text().trim_end());
    }
    Ok((r, !prop.flags_agree()))
}

fn states(args: &StatesArgs) -> Outcome {
    let ts = load_space(&args.file)?;
    let mut r = Report::default();
    r.section("states");
    let mut negative = false;
    if let Some(path) = &args.verify {
        let text = read(path)?;
        let lines = text
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        for (i, line) in lines.enumerate() {
            let state = ExactState::parse_line(line)?;
            let check = verify_state(&ts, &state)?;
            negative |= !check.valid;
            r.row(&format!("state{i}.valid"), check.valid)
                .row(&format!("state{i}.worst_test"), check.worst_test)
                .row(&format!("state{i}.residual"), fixed(check.residual));
        }
        return Ok((r, negative));
    }
    if args.dispersion_free || args.udf {
        if args.dispersion_free {
            let all = dispersion_free_states_with_cap(&ts, args.cap)?;
            r.row("dispersion_free", all.len());
            negative |= all.is_empty();
            for s in all {
                r.line(s.to_line());
            }
        }
        if args.udf {
            let (udf, uncovered) = is_udf_with_cap(&ts, args.cap)?;
            r.row("udf", udf);
            if let Some(x) = uncovered {
                r.row("uncovered", x);
            }
            negative |= !udf;
        }
        return Ok((r, negative));
    }
    match solve_state(&ts) {
        Feasibility::Feasible(s) => {
            r.row("feasible", true);
            r.line(s.to_line());
            Ok((r, false))
        }
        Feasibility::Infeasible(cert) => {
            r.row("feasible", false)
                .row("certificate_checked", cert.check(&ts));
            let ys: Vec<String> = cert.multipliers.iter().map(ToString::to_string).collect();
            r.line(format!("certificate {}", ys.join(" ")));
            Ok((r, true))
        }
    }
}

fn named_algebra(name: &str) -> Result<Orthoalgebra, CliError> {
    let parse = |prefix: &str| {
        name.strip_prefix(prefix)
            .and_then(|n| n.parse::<usize>().ok())
    };
    if let Some(n) = parse("boolean-").filter(|n| (1..=6).contains(n)) {
        return Ok(Orthoalgebra::boolean(n));
    }
    if let Some(n) = parse("mo-").filter(|n| (1..=8).contains(n)) {
        return Ok(Orthoalgebra::mo(n));
    }
    Err(CliError::Usage(format!(
        "unknown orthoalgebra `{name}` (expected boolean-N with N ≤ 6 or mo-N with N ≤ 8)"
    )))
}

fn oa(cmd: &OaCommand) -> Outcome {
    let mut r = Report::default();
    match cmd {
        OaCommand::Gen { name } => {
            r.line(named_algebra(name)?.to_text().trim_end());
            Ok((r, false))
        }
        OaCommand::Space { file } => {
            let l = Orthoalgebra::parse(&read(file)?)?;
            r.line(oa_to_test_space(&l)?.to_tsp().trim_end());
            Ok((r, false))
        }
        OaCommand::Roundtrip { file } => {
            let l = Orthoalgebra::parse(&read(file)?)?;
            r.section("roundtrip").row("elements", l.len());
            match roundtrip_logic(&l)? {
                Some(rt) => {
                    let canonical = canonical_isomorphism(&l, &rt.space, &rt.logic).is_some();
                    r.row("outcomes", rt.space.outcome_count())
                        .row("tests", rt.space.tests().len())
                        .row("classes", rt.logic.len())
                        .row("isomorphic", true)
                        .row("canonical", canonical);
                    Ok((r, !canonical))
                }
                None => {
                    r.row("isomorphic", false);
                    Ok((r, true))
                }
            }
        }
    }
}

fn coords_path(file: &Path, coords: Option<&Path>) -> Result<PathBuf, CliError> {
    match coords {
        Some(p) => Ok(p.to_path_buf()),
        None if file == Path::new("-") => Err(CliError::Usage(
            "--coords is required when reading stdin".into(),
        )),
        None => Ok(file.with_extension("coords")),
    }
}

fn load_sample(
    file: &Path,
    coords: Option<&Path>,
    ortho_tol: f64,
) -> Result<(MetricSample, String), CliError> {
    let text = read(file)?;
    let ts = TestSpace::parse(&text)?;
    let coords = parse_coords(&read(&coords_path(file, coords)?)?)?;
    Ok((MetricSample::from_space(&ts, &coords, ortho_tol)?, text))
}

fn frames_header(dim: usize, count: usize, seed: u64) -> String {
    format!("# frames d={dim} count={count} seed={seed}\n")
}

/// `(d, count, seed)` from a `# frames` header line.
fn parse_header(text: &str) -> Option<(usize, usize, u64)> {
    let line = text.lines().find_map(|l| l.strip_prefix("# frames "))?;
    let mut d = None;
    let mut count = None;
    let mut seed = None;
    for field in line.split_whitespace() {
        match field.split_once('=')? {
            ("d", v) => d = v.parse().ok(),
            ("count", v) => count = v.parse().ok(),
            ("seed", v) => seed = v.parse().ok(),
            _ => {}
        }
    }
    Some((d?, count?, seed?))
}

fn sample(dim: usize, count: usize, seed: u64, output: &Path) -> Outcome {
    let s = sample_frames(dim, count, seed)?;
    let coords = output.with_extension("coords");
    write(
        output,
        &format!(
            "{}{}",
            frames_header(dim, count, seed),
            s.test_space().to_tsp()
        ),
    )?;
    write(&coords, &s.to_coords())?;
    let mut r = Report::default();
    r.section("sample")
        .row("dimension", dim)
        .row("frames", count)
        .row("outcomes", s.len())
        .row("seed", seed)
        .row("tsp", output.display())
        .row("coords", coords.display());
    Ok((r, false))
}

fn metric_check(file: &Path, coords: Option<&Path>, ortho_tol: f64, cap_degrees: f64) -> Outcome {
    let (s, _) = load_sample(file, coords, ortho_tol)?;
    let mut r = Report::default();
    let norm_dev = s
        .points()
        .iter()
        .map(|p| (dot(p, p).sqrt() - 1.0).abs())
        .fold(0.0, f64::max);
    let mut inner = 0.0f64;
    for t in 0..s.tests().len() {
        let pts = s.test_points(t);
        for (i, x) in pts.iter().enumerate() {
            for y in &pts[i + 1..] {
                inner = inner.max(dot(x, y).abs());
            }
        }
    }
    let max_test = s.tests().iter().map(|t| t.len()).max().unwrap_or(0);
    let pairs = s.orthogonal_pairs();
    let largest = max_orthogonal_subset_with_pairs(s.len(), &pairs).len();
    let min_tno = (0..s.len())
        .map(|x| tno_radius_with_pairs(&s, &pairs, x))
        .fold(f64::INFINITY, f64::min);
    let mixed = gleason_state(&s, &DensityMatrix::maximally_mixed(s.dim())?)?;
    let residual = verify_state(s.test_space(), &mixed)?.residual;

    r.section("sample")
        .row("dimension", s.dim())
        .row("outcomes", s.len())
        .row("tests", s.tests().len())
        .row("ortho_tol", sci(ortho_tol));
    r.section("invariants")
        .row("max_norm_deviation", sci(norm_dev))
        .row("max_test_inner_product", sci(inner))
        .row("max_test_size", max_test)
        .row("orthogonal_pairs", pairs.len())
        .row("largest_orthogonal_subset", largest)
        .row("min_tno_radius", fixed(min_tno))
        .row("mixed_state_residual", sci(residual));
    let mut negative = largest > s.dim() || residual > 1e-9;
    r.section("rank_bound")
        .row("cap_degrees", fixed(cap_degrees));
    match rank_bound_with_pairs(&s, &pairs, chord_for_angle(cap_degrees.to_radians())) {
        Ok(rb) => {
            r.row("caps", rb.bound).row("totally_non_orthogonal", true);
        }
        Err(e @ Error::CapNotTotallyNonOrthogonal { .. }) => {
            r.row("totally_non_orthogonal", false).row("offending", e);
            negative = true;
        }
        Err(e) => return Err(e.into()),
    }
    Ok((r, negative))
}

/// Basis file: an `open` line starts a basic open, each following
/// `ball <radius> <x> <y> ...` line adds a ball to it.
fn parse_basis(text: &str) -> Result<Vec<VietorisBasicOpen>, CliError> {
    let mut opens: Vec<Vec<Ball>> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let bad = |msg: &str| CliError::Usage(format!("basis line {}: {msg}", n + 1));
        let line = raw.split('#').next().unwrap_or("");
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            None => {}
            Some("open") => opens.push(Vec::new()),
            Some("ball") => {
                let values = tokens
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| bad(&format!("bad number `{t}`")))
                    })
                    .collect::<Result<Vec<f64>, _>>()?;
                let (&radius, center) =
                    values.split_first().ok_or_else(|| bad("missing radius"))?;
                opens
                    .last_mut()
                    .ok_or_else(|| bad("`ball` before any `open`"))?
                    .push(Ball {
                        center: center.to_vec(),
                        radius,
                    });
            }
            Some(other) => return Err(bad(&format!("unknown keyword `{other}`"))),
        }
    }
    opens
        .into_iter()
        .map(|balls| VietorisBasicOpen::new(balls).map_err(CliError::from))
        .collect()
}

fn extract(args: &ExtractArgs) -> Outcome {
    let (mut s, text) = load_sample(&args.file, args.coords.as_deref(), args.ortho_tol)?;
    let basis = if let Some(n) = args.basis.strip_prefix("auto:") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad basis size `{n}`")))?;
        auto_basis(&s, n, args.basis_radius)?
    } else if let Some(path) = args.basis.strip_prefix("file:") {
        parse_basis(&read(Path::new(path))?)?
    } else {
        return Err(CliError::Usage(format!(
            "bad basis `{}` (expected auto:N or file:PATH)",
            args.basis
        )));
    };
    let probes = s.points().to_vec();
    let mut result = extract_semiclassical(&s, &basis, args.delta, args.margin)?;
    let mut resampled = None;
    if let Some(factor) = args.resample_factor.filter(|&f| f > 1) {
        if !result.failures.is_empty() {
            let (d, count, seed) = parse_header(&text).ok_or_else(|| {
                CliError::Usage(
                    "--resample-factor needs a `# frames d= count= seed=` header".into(),
                )
            })?;
            s = sample_frames(d, count * factor, seed)?;
            result = extract_semiclassical(&s, &basis, args.delta, args.margin)?;
            result.coverage_radius = coverage_radius(&s, &result.selected, &probes);
            result.target_met = result.coverage_radius <= args.delta;
            resampled = Some(count * factor);
        }
    }
    let mut r = Report::default();
    r.section("extract")
        .row("basis_opens", basis.len())
        .row("selected", result.selected.len())
        .row("hits", result.basis_hits.len())
        .row("failures", result.failures.len())
        .row("hit_rate", fixed(result.hit_rate()))
        .row("coverage_radius", fixed(result.coverage_radius))
        .row("delta", fixed(args.delta))
        .row("target_met", result.target_met)
        .row("margin", sci(args.margin));
    if let Some(n) = resampled {
        r.row("resampled_frames", n);
    }
    if !result.failures.is_empty() {
        let list: Vec<String> = result.failures.iter().map(ToString::to_string).collect();
        r.row("failed_opens", list.join(","));
    }
    let negative = !result.failures.is_empty() || !result.target_met;
    if result.selected.is_empty() {
        return Ok((r, true));
    }
    let sub = s.restrict(&result.selected)?;
    let hv = hidden_variable_state(s.test_space(), &result.selected, args.seed)?;
    r.row(
        "hidden_variable_valid",
        verify_state(sub.test_space(), &hv)?.valid,
    );
    if let Some(out) = &args.output {
        let coords = out.with_extension("coords");
        write(out, &sub.test_space().to_tsp())?;
        write(&coords, &sub.to_coords())?;
        r.row("tsp", out.display()).row("coords", coords.display());
    }
    r.line(hv.to_line());
    Ok((r, negative))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trip() {
        let text = format!("{}outcomes a\ntest a\n", frames_header(3, 100, 7));
        assert_eq!(parse_header(&text), Some((3, 100, 7)));
        assert_eq!(parse_header("outcomes a\ntest a\n"), None);
    }

    #[test]
    fn basis_files() {
        let b = parse_basis("open\nball 0.5 1 0 0\nball 0.5 0 1 0\n# note\nopen\nball 2 0 0 1\n")
            .unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].balls().len(), 2);
        assert!(parse_basis("ball 1 0 0").is_err());
        assert!(parse_basis("open\nball -1 0 0").is_err());
        assert!(parse_basis("open\nball x").is_err());
    }

    #[test]
    fn named_algebras() {
        assert_eq!(named_algebra("boolean-2").unwrap().len(), 4);
        assert_eq!(named_algebra("mo-2").unwrap().len(), 6);
        assert!(named_algebra("boolean-99").is_err());
    }
}
