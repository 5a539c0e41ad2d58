use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use num_bigint::BigUint;
use subspace_codes::channel::{simulate as run_channel, ChannelParams, SimulationReport};
use subspace_codes::document::{Code, CodeSpec};
use subspace_codes::ff::factor::group_order;
use subspace_codes::ff::{factorize, FactorBudget, Factorization, MessageIndex, SmoothnessEntry};
use subspace_codes::isometry::{
    apply_isometry, hybrid_retrieve, search_isometry, IsometryDocument, SemiLinearIsometry,
};
use subspace_codes::linalg::Matrix;
use subspace_codes::orbit::{min_distance, CyclicOrbitCode, RetrievalCost};
use subspace_codes::spread::{verify_spread, Convention, MAX_CODEBOOK};
use subspace_codes::subspace::{subspace_distance, Subspace};
use subspace_codes::Error;

/// Codebooks above this size are summarized rather than listed.
const MAX_LISTED: usize = 1 << 16;

#[derive(Debug)]
pub enum CliError {
    Code(Error),
    Io {
        path: String,
        message: String,
    },
    Usage(String),
    /// A check failed; `report` is still printed on stdout.
    Verification {
        report: String,
        message: String,
    },
    NoIsometry,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Code(e) => e.kind(),
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Verification { .. } => "verification_failed",
            CliError::NoIsometry => "no_isometry",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Code(e) => e.to_string(),
            CliError::Io { path, message } => format!("{path}: {message}"),
            CliError::Usage(m) => m.clone(),
            CliError::Verification { message, .. } => message.clone(),
            CliError::NoIsometry => "no isometry maps the code onto the target".into(),
        }
    }

    pub fn report(&self) -> Option<&str> {
        match self {
            CliError::Verification { report, .. } => Some(report),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.message() }).to_string()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Code(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_input(path: &Path) -> Result<String> {
    let io_err = |e: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

fn load_code(path: &Path) -> Result<Code> {
    Ok(CodeSpec::from_json(&read_input(path)?)?.build()?)
}

fn read_matrix(path: &Path) -> Result<Matrix> {
    Ok(Matrix::parse_text(&read_input(path)?)?)
}

fn read_subspace(code: &Code, path: &Path) -> Result<Subspace> {
    let m = read_matrix(path)?;
    if m.cols() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "codeword has {} columns, code has n = {}",
            m.cols(),
            code.n()
        ))
        .into());
    }
    Ok(Subspace::try_row_space(code.field(), &m)?)
}

fn parse_big(s: &str) -> Result<BigUint> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a decimal integer: {s:?}")).into());
    }
    Ok(s.parse().expect("digits only"))
}

fn need_convention(convention: Option<Convention>) -> Result<Convention> {
    convention.ok_or_else(|| CliError::usage("spread codes need --convention adhoc|enum"))
}

fn orbit_code_required(code: &Code) -> Result<()> {
    match code {
        Code::Spread(_) => Err(CliError::usage("not an orbit code")),
        _ => Ok(()),
    }
}

fn format_factorization(f: &Factorization) -> String {
    if f.factors().is_empty() {
        return "1".into();
    }
    let parts: Vec<String> = f
        .factors()
        .iter()
        .map(|pp| match pp.exponent {
            1 => pp.prime.to_string(),
            e => format!("{}^{e}", pp.prime),
        })
        .collect();
    parts.join(" * ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Smoothness gate printed for orbit codes, as comment lines.
fn gate_lines(code: &CyclicOrbitCode) -> String {
    let f = code.gen_order_factors();
    let cost = code.retrieval_cost();
    let n = code.n();
    format!(
        "# generator_order: {} = {}\n# n^2-smooth: {} (largest prime {}, n^2 = {})\n# retrieval_cost: {}, about {:.0} group operations\n",
        code.gen_order(),
        format_factorization(f),
        yes_no(cost.smooth),
        cost.max_prime,
        n * n,
        cost.class,
        cost.estimated_operations
    )
}

fn header(code: &Code, convention: Option<Convention>) -> Result<String> {
    let mut s = String::new();
    let f = code.field();
    writeln!(s, "# family: {}", code.family()).unwrap();
    writeln!(s, "# q: {}", f.order()).unwrap();
    writeln!(s, "# n: {}", code.n()).unwrap();
    writeln!(s, "# k: {}", code.k()).unwrap();
    writeln!(s, "# size: {}", code.size()).unwrap();
    match code {
        Code::Spread(_) => {
            writeln!(s, "# convention: {}", need_convention(convention)?).unwrap();
        }
        Code::Orbit(c) => {
            writeln!(s, "# kind: {}", c.kind()).unwrap();
            writeln!(s, "# orbit_order: {}", c.orbit_order()).unwrap();
            s.push_str(&gate_lines(c));
        }
        Code::Union(c) => {
            writeln!(s, "# kind: {}", c.orbits()[0].kind()).unwrap();
            writeln!(s, "# orbits: {}", c.z()).unwrap();
            writeln!(s, "# c_star: {}", c.c_star()).unwrap();
            s.push_str(&gate_lines(&c.orbits()[0]));
        }
    }
    Ok(s)
}

/// Codewords in message order for the given convention.
fn ordered_codebook(code: &Code, convention: Option<Convention>) -> Result<Vec<Subspace>> {
    match code {
        Code::Spread(c) => {
            let conv = need_convention(convention)?;
            let size = codebook_len(&c.size())?;
            (0..size as u64)
                .map(|i| Ok(c.encode(&MessageIndex::from_u64(i, c.q()), conv)?))
                .collect()
        }
        _ => Ok(code.codebook()?),
    }
}

fn codebook_len(size: &BigUint) -> Result<usize> {
    usize::try_from(size)
        .ok()
        .filter(|&s| s <= MAX_CODEBOOK)
        .ok_or_else(|| {
            Error::CodebookTooSmall(format!("code of size {size} is too large to enumerate")).into()
        })
}

pub fn construct(path: &Path, convention: Option<Convention>, summary: bool) -> Result<String> {
    let code = load_code(path)?;
    let mut out = header(&code, convention)?;
    if summary {
        return Ok(out);
    }
    if code.size() > BigUint::from(MAX_LISTED) {
        writeln!(out, "# codewords omitted: more than {MAX_LISTED}").unwrap();
        return Ok(out);
    }
    for (i, u) in ordered_codebook(&code, convention)?.iter().enumerate() {
        writeln!(out, "\n# message {i}").unwrap();
        out.push_str(&u.basis().to_text());
    }
    Ok(out)
}

/// Codeword of `message`, with any comment lines that go with it.
fn encode_message(
    code: &Code,
    convention: Option<Convention>,
    message: &str,
) -> Result<(String, Subspace)> {
    match code {
        Code::Spread(c) => {
            let conv = need_convention(convention)?;
            let i = MessageIndex::parse_decimal(message, c.q())?;
            Ok((format!("# convention: {conv}\n"), c.encode(&i, conv)?))
        }
        Code::Orbit(c) => Ok((gate_lines(c), c.enc2(&parse_big(message)?)?)),
        Code::Union(c) => {
            let (j, u) = c.enc3(&parse_big(message)?)?;
            Ok((format!("{}# orbit: {j}\n", gate_lines(&c.orbits()[0])), u))
        }
    }
}

pub fn encode(
    path: &Path,
    convention: Option<Convention>,
    message: &str,
    orbit_only: bool,
) -> Result<String> {
    let code = load_code(path)?;
    if orbit_only {
        orbit_code_required(&code)?;
    }
    let (mut out, u) = encode_message(&code, convention, message)?;
    out.push_str(&u.basis().to_text());
    Ok(out)
}

pub struct RetrieveRequest<'a> {
    pub code: &'a Path,
    pub convention: Option<Convention>,
    pub codeword: Option<&'a Path>,
    pub power: Option<&'a Path>,
    pub orbit_id: Option<usize>,
    pub orbit_only: bool,
}

fn retrieve_codeword(code: &Code, convention: Option<Convention>, u: &Subspace) -> Result<String> {
    Ok(match code {
        Code::Spread(c) => c.retrieve(u, need_convention(convention)?)?.to_string(),
        Code::Orbit(c) => c.retrieve2_from_codeword(u)?.to_string(),
        Code::Union(c) => c.retrieve3_from_codeword(u)?.to_string(),
    })
}

pub fn retrieve(req: &RetrieveRequest) -> Result<String> {
    let code = load_code(req.code)?;
    if req.orbit_only {
        orbit_code_required(&code)?;
    }
    let mut out = String::new();
    let message = match (&code, req.codeword, req.power) {
        (_, None, None) => return Err(CliError::usage("give --codeword or --power")),
        (Code::Spread(_), _, Some(_)) => {
            return Err(CliError::usage("--power applies to orbit codes only"))
        }
        (Code::Spread(c), Some(w), None) => {
            let conv = need_convention(req.convention)?;
            writeln!(out, "# convention: {conv}").unwrap();
            c.retrieve(&read_subspace(&code, w)?, conv)?.to_string()
        }
        (Code::Orbit(c), Some(w), None) => c
            .retrieve2_from_codeword(&read_subspace(&code, w)?)?
            .to_string(),
        (Code::Orbit(c), None, Some(p)) => c.retrieve2_from_power(&read_matrix(p)?)?.to_string(),
        (Code::Union(c), None, Some(p)) => {
            let j = req.orbit_id.ok_or_else(|| {
                CliError::usage("retrieving from --power in a union code needs --orbit-id")
            })?;
            writeln!(out, "# orbit: {j}").unwrap();
            c.retrieve3(j, &read_matrix(p)?)?.to_string()
        }
        (Code::Union(c), Some(w), None) => {
            let u = read_subspace(&code, w)?;
            let (j, l) = match req.orbit_id {
                Some(j) => (j, c.orbit(j)?.retrieve2_from_codeword(&u)?),
                None => c.locate(&u)?,
            };
            writeln!(out, "# orbit: {j}").unwrap();
            (l + c.c_star() * BigUint::from(j - 1)).to_string()
        }
        (_, Some(_), Some(_)) => unreachable!("clap rejects --codeword with --power"),
    };
    writeln!(out, "{message}").unwrap();
    Ok(out)
}

pub fn distance(path: &Path, codewords: &[std::path::PathBuf]) -> Result<String> {
    let code = load_code(path)?;
    let d = match codewords {
        [] => min_distance(code.field(), &code.codebook()?)?,
        [a, b] => subspace_distance(
            code.field(),
            &read_subspace(&code, a)?,
            &read_subspace(&code, b)?,
        )?,
        _ => return Err(CliError::usage("give no --codeword or exactly two")),
    };
    Ok(format!("{d}\n"))
}

pub fn verify(path: &Path, convention: Option<Convention>) -> Result<String> {
    let code = load_code(path)?;
    let f = code.field();
    let mut out = String::new();
    let mut passed = true;
    match &code {
        Code::Spread(c) => {
            let conv = need_convention(convention)?;
            writeln!(out, "# convention: {conv}").unwrap();
            let book = ordered_codebook(&code, convention)?;
            let report = verify_spread(f, &book, c.k(), c.n());
            let round_trip = count_round_trip(&book, |u| Ok(c.retrieve(u, conv)?.to_biguint()))?;
            writeln!(out, "family: desarguesian_spread").unwrap();
            writeln!(
                out,
                "size: {} (expected {})",
                report.size, report.expected_size
            )
            .unwrap();
            writeln!(out, "wrong_shape: {}", report.wrong_shape.len()).unwrap();
            writeln!(out, "offending_pairs: {}", report.offending_pairs.len()).unwrap();
            writeln!(
                out,
                "covered_vectors: {} of {}",
                report.covered_vectors, report.ambient_nonzero_vectors
            )
            .unwrap();
            writeln!(out, "round_trip: {round_trip}/{}", book.len()).unwrap();
            passed &= report.passed && round_trip == book.len();
            if book.len() >= 2 {
                writeln!(out, "min_distance: {}", min_distance(f, &book)?).unwrap();
            }
        }
        Code::Orbit(c) => {
            writeln!(out, "family: cyclic_orbit").unwrap();
            passed &= verify_orbit(&mut out, c, &BigUint::default())?;
            let book = c.codebook()?;
            if book.len() >= 2 {
                writeln!(out, "min_distance: {}", min_distance(f, &book)?).unwrap();
            }
        }
        Code::Union(c) => {
            writeln!(out, "family: orbit_union").unwrap();
            for (j, o) in c.orbits().iter().enumerate() {
                writeln!(out, "orbit {}:", j + 1).unwrap();
                passed &= verify_orbit(&mut out, o, &(c.c_star() * BigUint::from(j)))?;
            }
            let book = c.codebook()?;
            let mut uniq = book.clone();
            uniq.sort();
            uniq.dedup();
            writeln!(out, "distinct_codewords: {} of {}", uniq.len(), book.len()).unwrap();
            let round_trip = count_round_trip(&book, |u| Ok(c.retrieve3_from_codeword(u)?))?;
            writeln!(out, "round_trip: {round_trip}/{}", book.len()).unwrap();
            passed &= uniq.len() == book.len() && round_trip == book.len();
            if book.len() >= 2 {
                writeln!(out, "min_distance: {}", min_distance(f, &book)?).unwrap();
            }
        }
    }
    writeln!(out, "passed: {}", yes_no(passed)).unwrap();
    if passed {
        Ok(out)
    } else {
        Err(CliError::Verification {
            report: out,
            message: format!("{} failed verification", code.family()),
        })
    }
}

fn count_round_trip<F>(book: &[Subspace], retrieve: F) -> Result<usize>
where
    F: Fn(&Subspace) -> Result<BigUint>,
{
    let mut ok = 0;
    for (i, u) in book.iter().enumerate() {
        if retrieve(u)? == BigUint::from(i) {
            ok += 1;
        }
    }
    Ok(ok)
}

/// Orbit checks; `offset` only labels the output. Returns whether all passed.
fn verify_orbit(out: &mut String, c: &CyclicOrbitCode, offset: &BigUint) -> Result<bool> {
    let book = c.codebook()?;
    let mut uniq = book.clone();
    uniq.sort();
    uniq.dedup();
    let divides = (c.gen_order() % c.orbit_order()) == BigUint::default();
    let closes = c.apply_power(c.orbit_order()) == *c.initial();
    let from_codeword = count_round_trip(&book, |u| Ok(c.retrieve2_from_codeword(u)?))?;
    let from_power = count_round_trip(&book, |u| {
        let i = c.retrieve2_from_codeword(u)?;
        Ok(c.retrieve2_from_power(&c.generator_power(&i))?)
    })?;
    writeln!(out, "  first_message: {offset}").unwrap();
    writeln!(out, "  kind: {}", c.kind()).unwrap();
    writeln!(
        out,
        "  orbit_order: {} (generator order {})",
        c.orbit_order(),
        c.gen_order()
    )
    .unwrap();
    writeln!(out, "  divides_generator_order: {}", yes_no(divides)).unwrap();
    writeln!(out, "  returns_to_initial: {}", yes_no(closes)).unwrap();
    writeln!(
        out,
        "  distinct_codewords: {} of {}",
        uniq.len(),
        book.len()
    )
    .unwrap();
    writeln!(out, "  round_trip_codeword: {from_codeword}/{}", book.len()).unwrap();
    writeln!(out, "  round_trip_power: {from_power}/{}", book.len()).unwrap();
    Ok(divides
        && closes
        && uniq.len() == book.len()
        && from_codeword == book.len()
        && from_power == book.len())
}

fn order_report(out: &mut String, label: &str, order: &BigUint, n: usize, budget: &FactorBudget) {
    writeln!(out, "{label}: {order}").unwrap();
    match factorize(order, budget) {
        Ok(f) => {
            let cost = RetrievalCost::new(&f, n);
            let probable = if f.has_probable_primes() {
                " (includes probable primes)"
            } else {
                ""
            };
            writeln!(out, "factorization: {}{probable}", format_factorization(&f)).unwrap();
            writeln!(out, "max_prime: {}", cost.max_prime).unwrap();
            writeln!(out, "max_exponent: {}", f.max_exponent()).unwrap();
            writeln!(out, "distinct_primes: {}", f.distinct_primes()).unwrap();
            writeln!(out, "n_squared: {}", n * n).unwrap();
            writeln!(out, "smooth: {}", yes_no(cost.smooth)).unwrap();
            writeln!(out, "cost_class: {}", cost.class).unwrap();
            writeln!(
                out,
                "estimated_operations: {:.0}",
                cost.estimated_operations
            )
            .unwrap();
        }
        Err(e) => {
            writeln!(out, "status: unknown").unwrap();
            writeln!(out, "reason: {e}").unwrap();
        }
    }
}

pub fn analyze_order(q: u32, n: usize) -> Result<String> {
    if q < 2 || n == 0 {
        return Err(CliError::usage("analyze needs q >= 2 and n >= 1"));
    }
    let mut out = format!("q: {q}\nn: {n}\n");
    order_report(
        &mut out,
        "order",
        &group_order(q, n),
        n,
        &FactorBudget::from_env(),
    );
    Ok(out)
}

pub fn analyze_table(q: u32, n_max: u32) -> Result<String> {
    if q < 2 {
        return Err(CliError::usage("analyze needs q >= 2"));
    }
    let mut out = String::from("# n max_prime max_exponent distinct_primes\n");
    for entry in subspace_codes::ff::smoothness_report(q, n_max, &FactorBudget::from_env()) {
        match entry {
            SmoothnessEntry::Smooth(row) => {
                writeln!(
                    out,
                    "{} {} {} {}",
                    row.n, row.max_prime, row.max_exponent, row.distinct_primes
                )
                .unwrap();
            }
            SmoothnessEntry::Unknown { n, reason } => {
                writeln!(out, "{n} unknown # {reason}").unwrap();
            }
        }
    }
    Ok(out)
}

pub fn analyze_code(path: &Path, orbit_only: bool) -> Result<String> {
    let code = load_code(path)?;
    if orbit_only {
        orbit_code_required(&code)?;
    }
    let budget = FactorBudget::from_env();
    let mut out = format!(
        "family: {}\nq: {}\nn: {}\n",
        code.family(),
        code.field().order(),
        code.n()
    );
    match &code {
        Code::Spread(_) => order_report(
            &mut out,
            "order",
            &group_order(code.field().order(), code.n()),
            code.n(),
            &budget,
        ),
        Code::Orbit(c) => {
            writeln!(out, "kind: {}", c.kind()).unwrap();
            order_report(&mut out, "generator_order", c.gen_order(), c.n(), &budget)
        }
        Code::Union(c) => {
            let o = &c.orbits()[0];
            writeln!(out, "kind: {}", o.kind()).unwrap();
            order_report(&mut out, "generator_order", o.gen_order(), o.n(), &budget)
        }
    }
    Ok(out)
}

pub struct SimulateRequest<'a> {
    pub code: &'a Path,
    pub convention: Option<Convention>,
    pub message: &'a str,
    pub erasures: usize,
    pub insertions: usize,
    pub seed: u64,
    pub json: bool,
}

pub fn simulate(req: &SimulateRequest) -> Result<String> {
    let code = load_code(req.code)?;
    let f = code.field();
    let (_, sent) = encode_message(&code, req.convention, req.message)?;
    let message = parse_big(req.message)?.to_string();
    let book = code.codebook()?;
    let params = ChannelParams {
        erasures: req.erasures,
        insertions: req.insertions,
        seed: req.seed,
    };
    let report = run_channel(f, &book, &message, &sent, &params, |u| {
        retrieve_codeword(&code, req.convention, u).map_err(|e| match e {
            CliError::Code(e) => e,
            other => Error::Usage(other.message()),
        })
    })?;
    if req.json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        if let Some(conv) = req.convention.filter(|_| matches!(code, Code::Spread(_))) {
            v["convention"] = serde_json::json!(conv.to_string());
        }
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&v).expect("json")
        ));
    }
    let mut out = String::new();
    if let Code::Spread(_) = code {
        writeln!(out, "# convention: {}", need_convention(req.convention)?).unwrap();
    }
    out.push_str(&report_text(&report));
    Ok(out)
}

fn report_text(r: &SimulationReport) -> String {
    let mut out = String::new();
    writeln!(out, "seed: {}", r.seed).unwrap();
    writeln!(out, "message: {}", r.message).unwrap();
    writeln!(out, "erasures: {}", r.erasures).unwrap();
    writeln!(out, "insertions: {}", r.insertions).unwrap();
    writeln!(out, "channel_distance: {}", r.channel_distance).unwrap();
    writeln!(out, "decoded_distance: {}", r.decoded_distance).unwrap();
    writeln!(
        out,
        "retrieved: {}",
        r.retrieved.as_deref().unwrap_or("none")
    )
    .unwrap();
    if !r.ties.is_empty() {
        writeln!(out, "ties: {}", r.ties.join(" ")).unwrap();
    }
    writeln!(out, "success: {}", yes_no(r.success)).unwrap();
    out
}

fn load_isometry(code: &Code, path: &Path) -> Result<SemiLinearIsometry> {
    let doc: IsometryDocument =
        serde_json::from_str(&read_input(path)?).map_err(|e| Error::Parse(e.to_string()))?;
    let iso = SemiLinearIsometry::from_document(code.field(), &doc)?;
    if iso.n() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "isometry acts on dimension {}, code on {}",
            iso.n(),
            code.n()
        ))
        .into());
    }
    Ok(iso)
}

pub fn isometry_apply(
    path: &Path,
    convention: Option<Convention>,
    iso_path: &Path,
    message: Option<&str>,
    codeword: Option<&Path>,
    inverse: bool,
) -> Result<String> {
    let code = load_code(path)?;
    let mut iso = load_isometry(&code, iso_path)?;
    if inverse {
        iso = iso.inverse(code.field());
    }
    let (mut out, u) = match (message, codeword) {
        (Some(m), _) => encode_message(&code, convention, m)?,
        (None, Some(w)) => (String::new(), read_subspace(&code, w)?),
        (None, None) => return Err(CliError::usage("give --message or --codeword")),
    };
    out.push_str(&apply_isometry(code.field(), &u, &iso)?.basis().to_text());
    Ok(out)
}

pub fn isometry_retrieve(
    path: &Path,
    convention: Option<Convention>,
    iso_path: &Path,
    codeword: &Path,
) -> Result<String> {
    let code = load_code(path)?;
    let iso = load_isometry(&code, iso_path)?;
    let received = read_subspace(&code, codeword)?;
    match &code {
        Code::Spread(c) => {
            let conv = need_convention(convention)?;
            let i = hybrid_retrieve(c, conv, &iso, &received)?;
            Ok(format!("# convention: {conv}\n{i}\n"))
        }
        _ => {
            let back = apply_isometry(code.field(), &received, &iso.inverse(code.field()))?;
            Ok(format!(
                "{}\n",
                retrieve_codeword(&code, convention, &back)?
            ))
        }
    }
}

pub fn isometry_search(path: &Path, target: &Path) -> Result<String> {
    let code = load_code(path)?;
    let other = load_code(target)?;
    if code.field().order() != other.field().order() || code.n() != other.n() {
        return Err(CliError::usage("codes live in different ambient spaces"));
    }
    match search_isometry(code.field(), &code.codebook()?, &other.codebook()?)? {
        Some(iso) => Ok(format!(
            "{}\n",
            serde_json::to_string(&iso.to_document()).expect("json")
        )),
        None => Err(CliError::NoIsometry),
    }
}
