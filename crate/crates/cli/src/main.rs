use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grscrack::attacks::{self, AttackOptions, AttackStats};
use grscrack::experiment::{self, BenchRow, Scheme};
use grscrack::grs::GrsSpec;
use grscrack::io::{self, CiphertextJson, CodeJson, Crack, GrsSpecJson, MessageJson, PublicKey, SecretKey};
use grscrack::schemes::{bbcrs, bl, random_error, wieschebrink, RankOnePart};
use grscrack::{Error, Fe, Field, FieldSpec, LinearCode};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "grscrack", version, about = "Keys, ciphertexts and attacks for GRS-based McEliece variants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Encrypt a message under a public key.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext with a secret key.
    Decrypt(DecryptArgs),
    /// Recover a crack from a public key.
    Attack(AttackArgs),
    /// Decrypt a ciphertext with a crack and the public key.
    CrackDecrypt(CrackDecryptArgs),
    /// Report square-code dimensions of a code or public key.
    Distinguish(InputArgs),
    /// Recover support and multipliers of a GRS code.
    GrsRecover(GrsRecoverArgs),
    /// Write a random GRS or random linear code.
    GenCode(GenCodeArgs),
    /// Time attacks over a parameter preset.
    Bench(BenchArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Field order; a prime or prime power.
    #[arg(long, conflicts_with_all = ["p", "m"])]
    q: Option<u64>,
    /// Field characteristic, used with --m.
    #[arg(long, requires = "m")]
    p: Option<u32>,
    /// Extension degree, used with --p.
    #[arg(long, requires = "p")]
    m: Option<u32>,
}

impl FieldArgs {
    fn field(&self) -> Result<Field, Failure> {
        let spec = match (self.q, self.p, self.m) {
            (Some(q), None, None) => FieldSpec::from_order(q),
            (None, Some(p), Some(m)) => FieldSpec::with_default_modulus(p, m),
            _ => return Err(Failure::Param("give the field as --q or as --p with --m".into())),
        };
        spec.and_then(Field::new).map_err(param)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Wieschebrink,
    Bl,
    Bbcrs,
}

#[derive(Clone, Copy, ValueEnum)]
enum RankOneArg {
    Random,
    NonDegenerate,
    Zero,
}

#[derive(Args)]
struct KeygenArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Random columns (Wieschebrink).
    #[arg(long)]
    r: Option<usize>,
    /// Size parameter of the secret set, which has 3 * ell positions (Bogdanov-Lee).
    #[arg(long)]
    ell: Option<usize>,
    /// Rank-one part of the secret transform (BBCRS).
    #[arg(long, value_enum, default_value = "random")]
    rank_one: RankOneArg,
    #[arg(long)]
    seed: u64,
    /// Directory receiving public.json and secret.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EncryptArgs {
    /// Public key file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated message codes; random when absent.
    #[arg(long, value_delimiter = ',')]
    message: Option<Vec<u32>>,
    /// Error weight (Wieschebrink, BBCRS); defaults to the decoding capacity.
    #[arg(long)]
    weight: Option<usize>,
    /// Per-position noise rate (Bogdanov-Lee).
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    #[arg(long)]
    seed: u64,
    /// Ciphertext file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the message, useful with a random message.
    #[arg(long)]
    message_out: Option<PathBuf>,
}

#[derive(Args)]
struct DecryptArgs {
    /// Secret key file.
    #[arg(long)]
    key: PathBuf,
    /// Ciphertext file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Message file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    /// Public key file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Expected scheme; the key file's own tag is used when absent.
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    trial_cap: Option<u64>,
    /// Crack file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CrackDecryptArgs {
    #[arg(long)]
    crack: PathBuf,
    /// Public key file the crack was computed from.
    #[arg(long)]
    key: PathBuf,
    /// Ciphertext file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// Code or public key file.
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct GrsRecoverArgs {
    /// Code or public key file.
    #[arg(long = "in")]
    input: PathBuf,
    /// GRS description file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeKind {
    Grs,
    Random,
}

#[derive(Args)]
struct GenCodeArgs {
    #[arg(long, value_enum)]
    kind: CodeKind,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    preset: String,
    /// Overrides the preset's trial count.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    trial_cap: Option<u64>,
    /// CSV file.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failed command; the variant fixes the exit code.
enum Failure {
    Param(String),
    Decrypt(String),
    Attack(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Param(_) => 2,
            Failure::Decrypt(_) => 3,
            Failure::Attack(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Param(m) | Failure::Decrypt(m) | Failure::Attack(m) => m,
        }
    }
}

fn param(e: impl Display) -> Failure {
    Failure::Param(e.to_string())
}

type CmdResult = Result<(), Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Param(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Param(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

/// Writes `text` to `path`, or prints it when there is no path.
fn emit(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Param(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Loads a code from a code file or from a public key file.
fn read_code(path: &Path) -> Result<LinearCode, Failure> {
    let value: serde_json::Value = read_json(path)?;
    let code = if value.get("scheme").is_some() {
        let pk: PublicKey = serde_json::from_value(value).map_err(|e| Failure::Param(format!("{}: {e}", path.display())))?;
        LinearCode::from_generator(pk.generator())
    } else {
        let cj: CodeJson = serde_json::from_value(value).map_err(|e| Failure::Param(format!("{}: {e}", path.display())))?;
        LinearCode::try_from(&cj)
    };
    code.map_err(|e| Failure::Param(format!("{}: {e}", path.display())))
}

fn read_ciphertext(path: &Path, f: &Field) -> Result<Vec<Fe>, Failure> {
    let ct: CiphertextJson = read_json(path)?;
    io::elements(f, "c", &ct.c).map_err(|e| Failure::Param(format!("{}: {e}", path.display())))
}

fn keygen(a: KeygenArgs) -> CmdResult {
    let f = a.field.field()?;
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let (public, secret) = match a.scheme {
        SchemeArg::Wieschebrink => {
            let r = a.r.ok_or_else(|| Failure::Param("wieschebrink needs --r".into()))?;
            let keys = wieschebrink::keygen(&f, a.n, a.k, r, &mut rng).map_err(param)?;
            (PublicKey::Wieschebrink(keys.public), SecretKey::Wieschebrink(keys.secret))
        }
        SchemeArg::Bl => {
            let ell = a.ell.ok_or_else(|| Failure::Param("bl needs --ell".into()))?;
            let keys = bl::keygen(&f, a.n, a.k, ell, &mut rng).map_err(param)?;
            (PublicKey::Bl(keys.public), SecretKey::Bl(keys.secret))
        }
        SchemeArg::Bbcrs => {
            let part = match a.rank_one {
                RankOneArg::Random => RankOnePart::Random,
                RankOneArg::NonDegenerate => RankOnePart::NonDegenerate,
                RankOneArg::Zero => RankOnePart::Zero,
            };
            let keys = bbcrs::keygen(&f, a.n, a.k, part, &mut rng).map_err(param)?;
            (PublicKey::Bbcrs(keys.public), SecretKey::Bbcrs(keys.secret))
        }
    };
    std::fs::create_dir_all(&a.out).map_err(|e| Failure::Param(format!("cannot create {}: {e}", a.out.display())))?;
    emit(Some(&a.out.join("public.json")), &to_json(&public))?;
    emit(Some(&a.out.join("secret.json")), &to_json(&secret))
}

fn encrypt(a: EncryptArgs) -> CmdResult {
    let pk: PublicKey = read_json(&a.input)?;
    let f = pk.field().clone();
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let k = pk.generator().rows();
    let len = if matches!(pk, PublicKey::Bl(_)) { 1 } else { k };
    let m = match &a.message {
        Some(codes) if codes.len() != len => {
            return Err(Failure::Param(format!("message has {} entries, expected {len}", codes.len())))
        }
        Some(codes) => io::elements(&f, "message", codes).map_err(param)?,
        None => f.random_vec(len, &mut rng),
    };
    let c = match &pk {
        PublicKey::Wieschebrink(p) => {
            let w = a.weight.unwrap_or_else(|| p.error_weight());
            encrypt_weighted(p.error_weight(), w, || p.encrypt_with_error(&m, &random_error(&f, p.gen.cols(), w, &mut rng)))?
        }
        PublicKey::Bbcrs(p) => {
            let w = a.weight.unwrap_or_else(|| p.error_weight());
            encrypt_weighted(p.error_weight(), w, || p.encrypt_with_weight(&m, w, &mut rng))?
        }
        PublicKey::Bl(p) => {
            if !(0.0..=1.0).contains(&a.eta) {
                return Err(Failure::Param(format!("eta must lie in [0, 1], got {}", a.eta)));
            }
            p.encrypt(m[0], a.eta, &mut rng)
        }
    };
    emit(a.out.as_deref(), &to_json(&CiphertextJson { c: io::codes(&c) }))?;
    match &a.message_out {
        Some(path) => emit(Some(path), &to_json(&MessageJson { m: io::codes(&m) })),
        None => Ok(()),
    }
}

fn encrypt_weighted(capacity: usize, w: usize, enc: impl FnOnce() -> Vec<Fe>) -> Result<Vec<Fe>, Failure> {
    if w > capacity {
        return Err(Failure::Param(format!("error weight {w} exceeds the decoding capacity {capacity}")));
    }
    Ok(enc())
}

fn decrypt(a: DecryptArgs) -> CmdResult {
    let sk: SecretKey = read_json(&a.key)?;
    let c = read_ciphertext(&a.input, sk.field())?;
    let m = sk.decrypt(&c).map_err(decrypt_failure)?;
    emit(a.out.as_deref(), &to_json(&MessageJson { m: io::codes(&m) }))
}

fn decrypt_failure(e: Error) -> Failure {
    match e {
        Error::Domain(_) | Error::Parameter(_) | Error::Format(_) => param(e),
        _ => Failure::Decrypt(e.to_string()),
    }
}

fn report(stats: &AttackStats, total: f64, sizes: &[(&str, String)]) -> String {
    let mut lines = vec![format!("trials: {}", stats.trials)];
    lines.extend(stats.phases.iter().map(|p| format!("phase {}: {:.3}s", p.name, p.seconds)));
    lines.push(format!("total: {total:.3}s"));
    lines.extend(sizes.iter().map(|(name, value)| format!("{name}: {value}")));
    lines.join("\n")
}

fn attack(a: AttackArgs) -> CmdResult {
    let pk: PublicKey = read_json(&a.input)?;
    if let Some(s) = a.scheme {
        let want = match s {
            SchemeArg::Wieschebrink => "wieschebrink",
            SchemeArg::Bl => "bl",
            SchemeArg::Bbcrs => "bbcrs",
        };
        if want != pk.scheme() {
            return Err(Failure::Param(format!("--scheme {want} but the key is for {}", pk.scheme())));
        }
    }
    let public = LinearCode::from_generator(pk.generator()).map_err(param)?;
    let opts = AttackOptions { trial_cap: a.trial_cap, jobs: a.jobs.max(1) };
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let start = Instant::now();
    let outcome = match &pk {
        PublicKey::Wieschebrink(p) => attacks::attack_wieschebrink(&public, p.n, p.k, p.r, &opts, &mut rng).map(|(c, s)| {
            let sizes = vec![
                ("random positions", c.random_positions.len().to_string()),
                ("recovered GRS length", c.recovered_spec.n().to_string()),
            ];
            (Crack::Wieschebrink(c), s, sizes)
        }),
        PublicKey::Bl(p) => attacks::attack_bl(&public, p.ell, &opts, &mut rng).map(|(c, s)| {
            let sizes = vec![("secret set size", c.l.len().to_string())];
            (Crack::Bl(c), s, sizes)
        }),
        PublicKey::Bbcrs(_) => attacks::attack_bbcrs(&public, &opts, &mut rng).map(|(c, s)| {
            let sizes = vec![
                ("hidden GRS dimension", c.c_spec.k().to_string()),
                ("dual path", c.dual_path.to_string()),
            ];
            (Crack::Bbcrs(c), s, sizes)
        }),
    };
    let total = start.elapsed().as_secs_f64();
    match outcome {
        Ok((crack, stats, sizes)) => {
            // the report goes to stderr when stdout carries the crack
            let text = report(&stats, total, &sizes);
            if a.out.is_some() {
                println!("{text}");
            } else {
                eprintln!("{text}");
            }
            emit(a.out.as_deref(), &to_json(&crack))
        }
        Err(e @ (Error::Parameter(_) | Error::Domain(_))) => Err(param(e)),
        Err(e) => Err(Failure::Attack(format!("{e} (after {total:.3}s)"))),
    }
}

fn crack_decrypt(a: CrackDecryptArgs) -> CmdResult {
    let crack: Crack = read_json(&a.crack)?;
    let pk: PublicKey = read_json(&a.key)?;
    let c = read_ciphertext(&a.input, pk.field())?;
    let m = crack.decrypt(&pk, &c).map_err(decrypt_failure)?;
    emit(a.out.as_deref(), &to_json(&MessageJson { m: io::codes(&m) }))
}

fn distinguish(a: InputArgs) -> CmdResult {
    let code = read_code(&a.input)?;
    let r = code.square_dim_report();
    println!("n: {}", r.n);
    println!("k: {}", r.k);
    println!("dim_square: {}", r.dim_sq);
    println!("grs_dim (2k - 1): {}", r.grs_dim);
    println!("random_dim (min(n, k(k+1)/2)): {}", r.random_dim);
    match r.dim_dual_sq {
        Some(d) => println!("dim_dual_square: {d}"),
        None => println!("dim_dual_square: none (full space)"),
    }
    println!("grs_like: {}", r.grs_like);
    Ok(())
}

fn grs_recover(a: GrsRecoverArgs) -> CmdResult {
    let code = read_code(&a.input)?;
    let spec: GrsSpec = attacks::recover_grs(&code).map_err(|e| Failure::Attack(e.to_string()))?;
    emit(a.out.as_deref(), &to_json(&GrsSpecJson::from(&spec)))
}

fn gen_code(a: GenCodeArgs) -> CmdResult {
    let f = a.field.field()?;
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let code = match a.kind {
        CodeKind::Grs => GrsSpec::random(&f, a.n, a.k, &mut rng).map_err(param)?.code(),
        CodeKind::Random => {
            if a.k == 0 || a.k > a.n {
                return Err(Failure::Param(format!("need 1 <= k <= n, got n={}, k={}", a.n, a.k)));
            }
            LinearCode::random(&f, a.n, a.k, &mut rng)
        }
    };
    emit(a.out.as_deref(), &to_json(&CodeJson::from(&code)))
}

fn bench(a: BenchArgs) -> CmdResult {
    let preset = experiment::preset(&a.preset).map_err(param)?;
    let trials = a.trials.unwrap_or(preset.trials);
    let opts = AttackOptions { trial_cap: a.trial_cap, jobs: a.jobs.max(1) };
    let mut rows: Vec<BenchRow> = Vec::new();
    println!("preset {} ({trials} trials per row)", preset.name);
    println!("{:<13} {:>5} {:>5} {:>5} {:>5} {:>12} {:>9} {:>12}", "scheme", "q", "n", "k", "r", "mean (s)", "success", "reference");
    for case in &preset.cases {
        let row = experiment::run_case(case, trials, a.seed, &opts).map_err(param)?;
        let scheme = match case.scheme {
            Scheme::Wieschebrink => "wieschebrink",
            Scheme::Bl => "bl",
            Scheme::Bbcrs => "bbcrs",
        };
        let reference = case.reference_seconds.map_or("-".to_string(), |t| format!("{t:.2}"));
        println!(
            "{scheme:<13} {:>5} {:>5} {:>5} {:>5} {:>12.3} {:>9.2} {reference:>12}",
            row.q, row.n, row.k, row.r, row.mean_seconds, row.success_rate
        );
        rows.push(row);
    }
    if let Some(path) = &a.out {
        let mut w = csv::Writer::from_path(path).map_err(|e| Failure::Param(format!("{}: {e}", path.display())))?;
        for row in &rows {
            w.serialize(row).map_err(param)?;
        }
        w.flush().map_err(param)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Keygen(a) => keygen(a),
        Command::Encrypt(a) => encrypt(a),
        Command::Decrypt(a) => decrypt(a),
        Command::Attack(a) => attack(a),
        Command::CrackDecrypt(a) => crack_decrypt(a),
        Command::Distinguish(a) => distinguish(a),
        Command::GrsRecover(a) => grs_recover(a),
        Command::GenCode(a) => gen_code(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
