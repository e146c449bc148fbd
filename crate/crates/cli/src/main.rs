//! `pcw`: command-line workbench for polycyclic group cryptography.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use pcw_core::attacks::{field_based_attack, lba, LbaConfig, Side};
use pcw_core::bench::{
    bench_collection, bench_csp, lba_campaign, render, ExperimentConfig, ExperimentReport, ReportFormat,
};
use pcw_core::oracles::{csp_enumerate, SearchBudget};
use pcw_core::pc::{check_consistency, collect, parse_presentation, write_presentation};
use pcw_core::platform::{
    direct_product, golden, heisenberg, parse_action_file, parse_rep, quartic_field, semidirect_from_action,
    unitriangular, write_rep, zsqrt2,
};
use pcw_core::protocols::aag::{aag_run, AagParams, AagPublicRecord};
use pcw_core::protocols::element_from;
use pcw_core::protocols::sharing::{
    ss_deal_nn, ss_deal_tn, ss_reconstruct_nn, ss_reconstruct_tn, RelatorShape,
};
use pcw_core::protocols::signature::{sig_keygen, sig_sign, sig_verify, PublicKey, Signature};
use pcw_core::smallcanc::{FreeWord, ShareBundle, SmallCancPresentation};
use pcw_core::{GroupElement, Int, PlatformGroup, SeededRng, Word};

#[derive(Parser)]
#[command(name = "pcw", version, about = "Polycyclic group cryptography workbench")]
struct Cli {
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format for `bench`
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build and inspect platform groups
    #[command(subcommand)]
    Group(GroupCmd),
    /// Conjugacy search oracles
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Anshel-Anshel-Goldfeld key exchange
    #[command(subcommand)]
    Aag(AagCmd),
    /// Sign a message with a key derived from --seed
    Sign(SignArgs),
    /// Verify a signature file
    Verify(VerifyArgs),
    /// Secret sharing over small-cancellation groups
    #[command(subcommand)]
    Share(ShareCmd),
    /// Attacks on AAG transcripts
    #[command(subcommand)]
    Attack(AttackCmd),
    /// Benchmarks
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Write the presentation of a group spec
    Make {
        spec: String,
        /// Also write the matrix image here, if the group has one
        #[arg(long)]
        rep: Option<PathBuf>,
    },
    /// Print Hirsch length and a consistency check
    Info {
        #[arg(long)]
        group: String,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Search for a common conjugator of the pairs in a file
    Csp {
        #[arg(long)]
        group: String,
        /// One pair per line: `<word> | <word>`
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_radius: usize,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: u64,
    },
}

#[derive(Subcommand)]
enum AagCmd {
    /// Run one exchange; the public record goes to --out
    Run {
        #[arg(long)]
        group: String,
        #[arg(long = "N1", default_value_t = 5)]
        n1: usize,
        #[arg(long = "N2", default_value_t = 5)]
        n2: usize,
        #[arg(long = "L1", default_value_t = 2)]
        l1: usize,
        #[arg(long = "L2", default_value_t = 4)]
        l2: usize,
        #[arg(long = "L", default_value_t = 4)]
        l: usize,
        /// Where to write the private record
        #[arg(long)]
        private: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SignArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    message: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    signature: PathBuf,
    #[arg(long)]
    message: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Nn,
    Tn,
}

#[derive(Subcommand)]
enum ShareCmd {
    /// Write one share file per participant into --dir
    Deal {
        #[arg(long, value_enum)]
        scheme: Scheme,
        /// Bit string for `nn`, integer below --p for `tn`
        #[arg(long)]
        secret: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 257)]
        p: u64,
        #[arg(long)]
        dir: PathBuf,
    },
    /// Reconstruct from share files
    Reconstruct {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 257)]
        p: u64,
        shares: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Alice,
    Bob,
}

#[derive(Subcommand)]
enum AttackCmd {
    /// Length-based attack
    Lba {
        #[arg(long)]
        transcript: PathBuf,
        /// Group spec; defaults to the one named in the transcript
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 2)]
        memory: usize,
        #[arg(long, default_value_t = 10_000)]
        max_iter: u64,
        #[arg(long, value_enum, default_value_t = SideArg::Alice)]
        side: SideArg,
    },
    /// Linear algebra on a matrix image
    Field {
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long)]
        group: Option<String>,
        /// Matrix image file; defaults to the group's built-in one
        #[arg(long)]
        rep: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BenchCommon {
    /// Group specs, in report order
    #[arg(long, num_args = 1.., required = true)]
    groups: Vec<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    len_min: usize,
    #[arg(long, default_value_t = 64)]
    len_max: usize,
    /// Run trials on one thread
    #[arg(long)]
    sequential: bool,
    /// Report timings as zero (for byte-stable output)
    #[arg(long)]
    zero_timings: bool,
}

#[derive(Subcommand)]
enum BenchCmd {
    Collection(BenchCommon),
    Csp {
        #[command(flatten)]
        common: BenchCommon,
        #[arg(long, default_value_t = 6)]
        conj_len: usize,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: u64,
        #[arg(long, default_value_t = 8)]
        max_radius: usize,
    },
    Lba {
        #[command(flatten)]
        common: BenchCommon,
        #[arg(long = "N1", default_value_t = 5)]
        n1: usize,
        #[arg(long = "N2", default_value_t = 5)]
        n2: usize,
        #[arg(long = "L1", default_value_t = 2)]
        l1: usize,
        #[arg(long = "L2", default_value_t = 4)]
        l2: usize,
        #[arg(long = "L", default_value_t = 4)]
        l: usize,
        #[arg(long, default_value_t = 2)]
        memory: usize,
        #[arg(long, default_value_t = 10_000)]
        max_iter: u64,
    },
}

/// Resolves a group spec: a built-in name, `ut:<n>`, `semidirect:<file>`,
/// `product:<spec>,<spec>`, or a presentation file.
fn resolve_group(spec: &str) -> Result<PlatformGroup> {
    let g = match spec {
        "heisenberg" => heisenberg(),
        "zsqrt2" => zsqrt2(),
        "golden" => golden(),
        "quartic" => quartic_field(),
        _ => {
            if let Some(n) = spec.strip_prefix("ut:") {
                unitriangular(n.parse().context("ut:<n> needs an integer")?)?
            } else if let Some(file) = spec.strip_prefix("semidirect:") {
                let (degree, action) = parse_action_file(&read(Path::new(file))?)?;
                semidirect_from_action(degree, &action)?
            } else if let Some(rest) = spec.strip_prefix("product:") {
                let (a, b) = rest
                    .split_once(',')
                    .ok_or_else(|| anyhow!("product:<spec>,<spec> needs two specs"))?;
                direct_product(&resolve_group(a)?, &resolve_group(b)?)?
            } else {
                let p = parse_presentation(&read(Path::new(spec))?)?;
                PlatformGroup::from_presentation(spec, p)?
            }
        }
    };
    Ok(g)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn parse_word(s: &str) -> Result<Word> {
    s.parse().map_err(|e| anyhow!("bad word {s:?}: {e}"))
}

#[derive(Serialize, Deserialize)]
struct SignatureFile {
    group: String,
    g: Vec<Int>,
    x: Vec<Int>,
    y: Vec<Int>,
    alpha: Vec<Int>,
    n_j: u64,
}

#[derive(Serialize, Deserialize)]
struct ShareFile {
    participant: usize,
    alphabet: usize,
    relators: Vec<FreeWord>,
    codewords: Vec<FreeWord>,
}

impl ShareFile {
    fn from_bundle(b: &ShareBundle) -> Self {
        ShareFile {
            participant: b.participant,
            alphabet: b.presentation.alphabet_size(),
            relators: b.presentation.relators().to_vec(),
            codewords: b.codewords.clone(),
        }
    }

    fn into_bundle(self) -> Result<ShareBundle> {
        Ok(ShareBundle {
            participant: self.participant,
            presentation: SmallCancPresentation::new(self.alphabet, self.relators)?,
            codewords: self.codewords,
        })
    }
}

#[derive(Serialize)]
struct GroupInfo<'a> {
    name: &'a str,
    generators: usize,
    hirsch: usize,
    consistent: bool,
    matrix_image: bool,
}

fn bench_config(c: &BenchCommon, seed: u64) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(c.trials, c.len_min, c.len_max, seed)?;
    cfg.sequential = c.sequential;
    cfg.zero_timings = c.zero_timings;
    Ok(cfg)
}

fn bench_groups(c: &BenchCommon) -> Result<Vec<(String, PlatformGroup)>> {
    c.groups.iter().map(|s| Ok((s.clone(), resolve_group(s)?))).collect()
}

fn load_public(path: &Path, group: Option<&str>) -> Result<(PlatformGroup, AagPublicRecord)> {
    let record: AagPublicRecord = serde_json::from_str(&read(path)?).context("parsing transcript")?;
    let g = resolve_group(group.unwrap_or(&record.group))?;
    Ok((g, record))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Group(GroupCmd::Make { spec, rep }) => {
            let g = resolve_group(&spec)?;
            emit(out, &write_presentation(g.presentation()))?;
            if let Some(path) = rep {
                let r = g.matrix_image().ok_or_else(|| anyhow!("{spec} has no matrix image"))?;
                fs::write(&path, write_rep(r))?;
            }
        }
        Command::Group(GroupCmd::Info { group }) => {
            let g = resolve_group(&group)?;
            let verdict = check_consistency(g.presentation(), 200, &mut SeededRng::new(cli.seed));
            emit(
                out,
                &json(&GroupInfo {
                    name: &group,
                    generators: g.ngens(),
                    hirsch: g.hirsch_length(),
                    consistent: verdict.is_consistent(),
                    matrix_image: g.matrix_image().is_some(),
                })?,
            )?;
        }
        Command::Oracle(OracleCmd::Csp {
            group,
            pairs,
            max_radius,
            max_nodes,
        }) => {
            let g = resolve_group(&group)?;
            let p = g.presentation();
            let mut list = Vec::new();
            for (n, line) in read(&pairs)?.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (a, b) = line
                    .split_once('|')
                    .ok_or_else(|| anyhow!("line {}: expected `<word> | <word>`", n + 1))?;
                list.push((collect(p, &parse_word(a)?)?, collect(p, &parse_word(b)?)?));
            }
            let r = csp_enumerate(&g, &list, SearchBudget::new(max_nodes, max_radius)?)?;
            emit(out, &json(&r)?)?;
        }
        Command::Aag(AagCmd::Run {
            group,
            n1,
            n2,
            l1,
            l2,
            l,
            private,
        }) => {
            let g = resolve_group(&group)?;
            let t = aag_run(&g, AagParams::new(n1, n2, l1, l2, l)?, &mut SeededRng::new(cli.seed))?;
            emit(out, &json(&t.public_record(&group))?)?;
            if let Some(path) = private {
                fs::write(&path, json(&t.private_record())?)?;
            }
        }
        Command::Sign(a) => {
            let g = resolve_group(&a.group)?;
            let msg = fs::read(&a.message).with_context(|| format!("reading {}", a.message.display()))?;
            let mut rng = SeededRng::new(cli.seed);
            let mut kp = sig_keygen(&g, &mut rng)?;
            let sig = sig_sign(&mut kp, &msg, &mut rng)?;
            let file = SignatureFile {
                group: a.group,
                g: kp.public().g.exps().to_vec(),
                x: kp.public().x.exps().to_vec(),
                y: sig.y.exps().to_vec(),
                alpha: sig.alpha.exps().to_vec(),
                n_j: sig.n_j,
            };
            emit(out, &json(&file)?)?;
        }
        Command::Verify(a) => {
            let file: SignatureFile = serde_json::from_str(&read(&a.signature)?).context("parsing signature")?;
            let g = resolve_group(&file.group)?;
            let p = g.presentation();
            let el = |v: &[Int]| -> Result<GroupElement> { Ok(element_from(p, v)?) };
            let pk = PublicKey {
                g: el(&file.g)?,
                x: el(&file.x)?,
            };
            let sig = Signature {
                y: el(&file.y)?,
                alpha: el(&file.alpha)?,
                n_j: file.n_j,
            };
            let msg = fs::read(&a.message).with_context(|| format!("reading {}", a.message.display()))?;
            let ok = sig_verify(&pk, &msg, &sig)?;
            emit(out, if ok { "valid\n" } else { "invalid\n" })?;
            if !ok {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Share(ShareCmd::Deal {
            scheme,
            secret,
            n,
            t,
            p,
            dir,
        }) => {
            let mut rng = SeededRng::new(cli.seed);
            let shape = RelatorShape::default();
            let bundles = match scheme {
                Scheme::Nn => {
                    let bits = secret
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(anyhow!("secret must be a bit string")),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    ss_deal_nn(&bits, n, shape, &mut rng)?
                }
                Scheme::Tn => ss_deal_tn(secret.parse().context("secret must be an integer")?, p, t, n, shape, &mut rng)?,
            };
            fs::create_dir_all(&dir)?;
            for b in &bundles {
                let path = dir.join(format!("share_{}.json", b.participant));
                fs::write(&path, json(&ShareFile::from_bundle(b))?)?;
                log::info!("wrote {}", path.display());
            }
        }
        Command::Share(ShareCmd::Reconstruct {
            scheme,
            n,
            t,
            p,
            shares,
        }) => {
            let bundles = shares
                .iter()
                .map(|f| {
                    let s: ShareFile = serde_json::from_str(&read(f)?).with_context(|| format!("parsing {}", f.display()))?;
                    s.into_bundle()
                })
                .collect::<Result<Vec<_>>>()?;
            let text = match scheme {
                Scheme::Nn => {
                    let bits = ss_reconstruct_nn(&bundles, n.unwrap_or(bundles.len()))?;
                    bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>()
                }
                Scheme::Tn => ss_reconstruct_tn(&bundles, t, p)?.to_string(),
            };
            emit(out, &format!("{text}\n"))?;
        }
        Command::Attack(AttackCmd::Lba {
            transcript,
            group,
            memory,
            max_iter,
            side,
        }) => {
            let (g, record) = load_public(&transcript, group.as_deref())?;
            let public = record.to_public(g.presentation())?;
            let cfg = LbaConfig {
                memory,
                max_iterations: max_iter,
                time_budget: None,
                side: match side {
                    SideArg::Alice => Side::Alice,
                    SideArg::Bob => Side::Bob,
                },
            };
            emit(out, &json(&lba(&public, &cfg)?)?)?;
        }
        Command::Attack(AttackCmd::Field { transcript, group, rep }) => {
            let (g, record) = load_public(&transcript, group.as_deref())?;
            let public = record.to_public(g.presentation())?;
            let parsed;
            let rep = match rep {
                Some(path) => {
                    parsed = parse_rep(&read(&path)?)?;
                    &parsed
                }
                None => g.matrix_image().ok_or_else(|| anyhow!("group has no matrix image; pass --rep"))?,
            };
            emit(out, &json(&field_based_attack(&public, rep, g.presentation())?)?)?;
        }
        Command::Bench(cmd) => {
            let mut report = ExperimentReport::new(cli.seed);
            match cmd {
                BenchCmd::Collection(c) => {
                    let cfg = bench_config(&c, cli.seed)?;
                    for (label, g) in bench_groups(&c)? {
                        report.rows.extend(bench_collection(&label, &g, &cfg)?);
                    }
                }
                BenchCmd::Csp {
                    common,
                    conj_len,
                    max_nodes,
                    max_radius,
                } => {
                    let cfg = bench_config(&common, cli.seed)?;
                    let budget = SearchBudget::new(max_nodes, max_radius)?;
                    for (label, g) in bench_groups(&common)? {
                        let gens: Vec<usize> = (0..g.ngens()).collect();
                        report.rows.extend(bench_csp(&label, &g, &cfg, &gens, conj_len, budget)?);
                    }
                }
                BenchCmd::Lba {
                    common,
                    n1,
                    n2,
                    l1,
                    l2,
                    l,
                    memory,
                    max_iter,
                } => {
                    let cfg = bench_config(&common, cli.seed)?;
                    let attack = LbaConfig {
                        memory,
                        max_iterations: max_iter,
                        ..LbaConfig::default()
                    };
                    let groups = bench_groups(&common)?;
                    report.rows = lba_campaign(&groups, AagParams::new(n1, n2, l1, l2, l)?, &attack, &cfg)?;
                }
            }
            emit(out, &render(&report, cli.format.into())?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PCW_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn builtin_specs() {
        assert_eq!(resolve_group("ut:5").unwrap().hirsch_length(), 10);
        assert_eq!(resolve_group("product:heisenberg,zsqrt2").unwrap().hirsch_length(), 6);
        assert!(resolve_group("ut:x").is_err());
        assert!(resolve_group("/no/such/file.pc").is_err());
    }
}
