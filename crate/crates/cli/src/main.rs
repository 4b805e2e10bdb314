use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sixglue::anodyne::{search_certificate, AnodyneCertificate, CertError};
use sixglue::cartesian::{kart_extension, BoxplusPart, Cart};
use sixglue::compactification::{build_box, build_cpt, certify_box, enumerate_kpt, KPT_CAP};
use sixglue::fincat::{check_cofiltered, ComposableChain, FinCategory, MarkedCategory};
use sixglue::gluing::{extend_cart, extend_comm, extend_full, GluingError, GridFunctorData};
use sixglue::grid::Discipline;
use sixglue::interchange::{
    category_dot, complex_dot, grid_dot, marked_category, poset_dot, CategoryDoc, CertificateDoc, FunctorDoc, GridDoc, PosetDoc,
    SubNerveDoc,
};
use sixglue::laws::{run_suite, Suite, SuiteConfig, DEFAULT_SEED};
use sixglue::{Exec, Poset, Report, SubNerve};

#[derive(Parser)]
#[command(name = "sixglue", version, about = "Generate, certify and check finite gluing data")]
struct Cli {
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a poset or complex.
    Gen {
        #[command(subcommand)]
        object: GenObject,
    },
    /// Produce an inner-anodyne certificate.
    Certify {
        #[command(subcommand)]
        target: CertifyTarget,
    },
    /// Re-validate a stored certificate.
    Verify { file: PathBuf },
    /// Run a law suite.
    Laws {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Categories of compactifications.
    Kpt {
        #[command(subcommand)]
        action: KptAction,
    },
    /// Right Kan extensions of grids to up-set lattices.
    Kart {
        #[command(subcommand)]
        action: KartAction,
    },
    /// Extend grid functor data to the marked category.
    Glue {
        #[arg(value_enum)]
        stage: GlueStage,
        #[command(flatten)]
        marked: MarkedArgs,
        /// Functor document `F`; the grid data is `F` composed with the diagonal.
        #[arg(long)]
        g: PathBuf,
        /// Truncation bound for morphisms in both classes.
        #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
        i_max: i32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-emit a document in either format.
    Export {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
        /// Category the grid document refers to.
        #[arg(long)]
        category: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenObject {
    /// The compactification poset.
    Cpt {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The union of the compactification pieces.
    Box {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The up-set lattice of the square grid.
    Cart {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The cartesianization complex, or one of its pieces.
    Boxplus {
        #[arg(long)]
        n: usize,
        /// A single piece `p,q`.
        #[arg(long, conflicts_with = "cart")]
        at: Option<String>,
        /// Only the pieces in the last column.
        #[arg(long)]
        cart: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum CertifyTarget {
    BoxInCpt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
    BoxplusInCart {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
    /// Search for moves between two complexes over the same poset.
    Search {
        #[arg(long)]
        start: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum KptAction {
    Enumerate {
        #[command(flatten)]
        marked: MarkedArgs,
        /// Composable morphisms, comma separated; a single object name gives a point.
        #[arg(long)]
        tau: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum KartAction {
    Extend {
        #[arg(long)]
        category: PathBuf,
        /// Grid document over the category.
        #[arg(long)]
        tau: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MarkedArgs {
    #[arg(long)]
    category: PathBuf,
    /// Vertical class: morphism names, or all | identities | injections | surjections.
    #[arg(long, default_value = "all")]
    e1: String,
    /// Horizontal class.
    #[arg(long, default_value = "all")]
    e2: String,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Interchange)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Interchange,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum GlueStage {
    Comm,
    Cart,
    Full,
}

/// Failure classes, by exit code.
enum Failure {
    /// A checked statement is false; the message carries the witness.
    Math(String),
    Usage(String),
    /// A search ran out of budget without deciding anything.
    Inconclusive(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Math(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Inconclusive(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Math(m) | Failure::Usage(m) | Failure::Inconclusive(m) => f.write_str(m),
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn cert_failure(e: CertError) -> Failure {
    match e {
        CertError::BudgetExhausted { .. } => Failure::Inconclusive(e.to_string()),
        other => Failure::Math(other.to_string()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize") + "\n"
}

fn emit_poset(p: &Poset, output: &Output) -> Outcome {
    let text = match output.format {
        Format::Interchange => to_json(&PosetDoc::from_poset(p)),
        Format::Dot => poset_dot(p),
    };
    write(output.out.as_deref(), &text)
}

fn emit_complex(k: &SubNerve, output: &Output) -> Outcome {
    let text = match output.format {
        Format::Interchange => to_json(&SubNerveDoc::from_complex(k)),
        Format::Dot => complex_dot(k),
    };
    write(output.out.as_deref(), &text)
}

fn emit_category(c: &FinCategory, output: &Output) -> Outcome {
    let text = match output.format {
        Format::Interchange => to_json(&CategoryDoc::from_category(c)),
        Format::Dot => category_dot(c),
    };
    write(output.out.as_deref(), &text)
}

fn load_category(path: &Path) -> Result<FinCategory, Failure> {
    read_json::<CategoryDoc>(path)?.to_category().map_err(usage)
}

fn load_marked(args: &MarkedArgs) -> Result<MarkedCategory, Failure> {
    let c = Arc::new(load_category(&args.category)?);
    marked_category(c, &args.e1, &args.e2).map_err(usage)
}

fn cart(n: usize) -> Result<Cart, Failure> {
    Cart::new(n).map_err(usage)
}

fn gen(object: GenObject) -> Outcome {
    match object {
        GenObject::Cpt { n, output } => emit_poset(&build_cpt(n), &output),
        GenObject::Box { n, output } => emit_complex(&build_box(&Arc::new(build_cpt(n)), n), &output),
        GenObject::Cart { n, output } => emit_poset(cart(n)?.poset(), &output),
        GenObject::Boxplus {
            n,
            at,
            cart: last_column,
            output,
        } => {
            let part = match at {
                Some(spec) => {
                    let (p, q) = spec
                        .split_once(',')
                        .and_then(|(p, q)| Some((p.trim().parse().ok()?, q.trim().parse().ok()?)))
                        .ok_or_else(|| usage(format!("--at expects `p,q`, got `{spec}`")))?;
                    BoxplusPart::At(p, q)
                }
                None if last_column => BoxplusPart::Cart,
                None => BoxplusPart::Full,
            };
            emit_complex(&cart(n)?.boxplus(part).map_err(usage)?, &output)
        }
    }
}

fn report_certificate(cert: &AnodyneCertificate, emit: Option<&Path>) -> Outcome {
    cert.validate()
        .map_err(|e| Failure::Math(format!("certificate does not validate: {e}")))?;
    let base = cert.start.base();
    println!("{} moves", cert.len());
    for m in &cert.moves {
        let names: Vec<&str> = m.chain.iter().map(|&v| base.name(v)).collect();
        println!("  [{}] k={}", names.join(","), m.k);
    }
    match emit {
        Some(path) => write(Some(path), &to_json(&CertificateDoc::from_certificate(cert))),
        None => Ok(()),
    }
}

fn certify(target: CertifyTarget) -> Outcome {
    match target {
        CertifyTarget::BoxInCpt { n, emit_certificate } => {
            let cert = certify_box(n).map_err(cert_failure)?;
            report_certificate(&cert, emit_certificate.as_deref())
        }
        CertifyTarget::BoxplusInCart { n, emit_certificate } => {
            let cert = cart(n)?.certify_boxplus_cart().map_err(cert_failure)?;
            report_certificate(&cert, emit_certificate.as_deref())
        }
        CertifyTarget::Search {
            start,
            target,
            budget,
            emit_certificate,
        } => {
            let start = read_json::<SubNerveDoc>(&start)?.to_complex().map_err(usage)?;
            let target = read_json::<SubNerveDoc>(&target)?.to_complex().map_err(usage)?;
            if start.base() != target.base() {
                return Err(usage("start and target live over different posets"));
            }
            // Both complexes must share one base allocation.
            let chains: Vec<Vec<usize>> = start.chains().iter().cloned().collect();
            let start = SubNerve::from_chains(target.base().clone(), &chains).map_err(usage)?;
            let cert = search_certificate(&start, &target, budget).map_err(cert_failure)?;
            report_certificate(&cert, emit_certificate.as_deref())
        }
    }
}

fn verify(file: &Path) -> Outcome {
    let cert = read_json::<CertificateDoc>(file)?.to_certificate().map_err(usage)?;
    cert.validate().map_err(|e| Failure::Math(format!("rejected: {e}")))?;
    println!("accepted: {} moves", cert.len());
    Ok(())
}

fn finish_report(report: &Report, out: Option<&Path>) -> Outcome {
    if let Some(path) = out {
        write(Some(path), &to_json(report))?;
    }
    print!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Math("some checks failed".into()))
    }
}

fn laws(suite: &str, cfg: &SuiteConfig, out: Option<&Path>) -> Outcome {
    let suites = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>().map_err(usage)?]
    };
    let mut report = Report::default();
    for s in suites {
        let r = run_suite(s, cfg).map_err(|e| Failure::Math(e.to_string()))?;
        report.absorb(s.name(), r);
    }
    finish_report(&report, out)
}

fn kpt(action: KptAction) -> Outcome {
    let KptAction::Enumerate { marked, tau, output } = action;
    let mc = load_marked(&marked)?;
    let c = &*mc.category;
    let chain = match c.object(tau.trim()) {
        Ok(x) => ComposableChain::point(x),
        Err(_) => {
            let edges = tau
                .split(',')
                .map(|s| c.morphism(s.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            ComposableChain::from_edges(c, &edges).map_err(usage)?
        }
    };
    let kpt = enumerate_kpt(&mc, &chain, KPT_CAP).map_err(usage)?;
    let verdict = match check_cofiltered(&kpt.category) {
        None => "cofiltered".to_string(),
        Some(v) => format!("not cofiltered: {v:?}"),
    };
    eprintln!(
        "{} compactifications, {} morphisms, {verdict}",
        kpt.objects.len(),
        kpt.category.num_morphisms()
    );
    emit_category(&kpt.category, &output)
}

fn kart(action: KartAction) -> Outcome {
    let KartAction::Extend { category, tau, out } = action;
    let c = load_category(&category)?;
    let tau = read_json::<GridDoc>(&tau)?.to_grid(&c).map_err(usage)?;
    if tau.rows != tau.cols {
        return Err(usage(format!(
            "the grid is {}x{}; a square grid is required",
            tau.rows, tau.cols
        )));
    }
    let lattice = cart(tau.rows)?;
    let ext = kart_extension(&c, &lattice, &tau).map_err(|e| Failure::Math(e.to_string()))?;
    let values: Vec<(String, String)> = (0..lattice.len())
        .map(|x| (lattice.poset().name(x).to_string(), c.object_name(ext.values[x]).to_string()))
        .collect();
    write(out.as_deref(), &to_json(&json!({ "n": ext.n, "values": values })))
}

fn glue(stage: GlueStage, marked: &MarkedArgs, g: &Path, i_max: i32, out: Option<&Path>) -> Outcome {
    let mc = load_marked(marked)?;
    let (target, functor) = read_json::<FunctorDoc>(g)?.to_functor(&mc.category).map_err(usage)?;
    let target = Arc::new(target);
    let discipline = match stage {
        GlueStage::Comm => Discipline::Comm,
        GlueStage::Cart | GlueStage::Full => Discipline::Cart,
    };
    let data = GridFunctorData::from_functor(&mc, discipline, target.clone(), &functor).map_err(glue_failure)?;
    // The cartesian stage extends grid data only; the other two produce a functor.
    let (extension, report) = match stage {
        GlueStage::Comm => extend_comm(&mc, &data).map(|(f, r)| (Some(f), r)),
        GlueStage::Cart => extend_cart(&mc, &data, i_max).map(|(_, r)| (None, r)),
        GlueStage::Full => extend_full(&mc, &data, i_max).map(|(f, r)| (Some(f), r)),
    }
    .map_err(glue_failure)?;
    if let Some(path) = out {
        let extension = extension.map(|f| FunctorDoc::from_functor(&mc.category, &target, &f));
        write(Some(path), &to_json(&json!({ "report": report, "extension": extension })))?;
    }
    finish_report(&report, None)
}

fn glue_failure(e: GluingError) -> Failure {
    match e {
        GluingError::HypothesisFailed { .. } | GluingError::NotFunctorial(_) | GluingError::MissingValue(_) => {
            Failure::Math(e.to_string())
        }
        other => usage(other),
    }
}

fn export(file: &Path, output: &Output, category: Option<&Path>) -> Outcome {
    let text = fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(usage)?;
    let fields = |names: &[&str]| names.iter().all(|n| value.get(n).is_some());
    let dot_of_report = || usage("a report has no DOT rendering");
    if fields(&["moves", "start", "target"]) {
        let doc: CertificateDoc = serde_json::from_value(value).map_err(usage)?;
        let cert = doc.to_certificate().map_err(usage)?;
        return match output.format {
            Format::Interchange => write(output.out.as_deref(), &to_json(&CertificateDoc::from_certificate(&cert))),
            Format::Dot => emit_complex(&cert.target, output),
        };
    }
    if fields(&["maximal_chains"]) {
        let doc: SubNerveDoc = serde_json::from_value(value).map_err(usage)?;
        return emit_complex(&doc.to_complex().map_err(usage)?, output);
    }
    if fields(&["elements", "covers"]) {
        let doc: PosetDoc = serde_json::from_value(value).map_err(usage)?;
        return emit_poset(&doc.to_poset().map_err(usage)?, output);
    }
    if fields(&["kind"]) {
        let doc: CategoryDoc = serde_json::from_value(value).map_err(usage)?;
        return emit_category(&doc.to_category().map_err(usage)?, output);
    }
    if fields(&["rows", "cols", "objects"]) {
        let path = category.ok_or_else(|| usage("a grid document needs --category"))?;
        let c = load_category(path)?;
        let grid = serde_json::from_value::<GridDoc>(value)
            .map_err(usage)?
            .to_grid(&c)
            .map_err(usage)?;
        let text = match output.format {
            Format::Interchange => to_json(&GridDoc::from_grid(&c, &grid)),
            Format::Dot => grid_dot(&c, &grid),
        };
        return write(output.out.as_deref(), &text);
    }
    if fields(&["checks"]) {
        let report: Report = serde_json::from_value(value).map_err(usage)?;
        return match output.format {
            Format::Interchange => write(output.out.as_deref(), &to_json(&report)),
            Format::Dot => Err(dot_of_report()),
        };
    }
    Err(usage(format!("{}: not a recognised document", file.display())))
}

fn run(cli: Cli) -> Outcome {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match cli.command {
        Command::Gen { object } => gen(object),
        Command::Certify { target } => certify(target),
        Command::Verify { file } => verify(&file),
        Command::Laws {
            suite,
            n,
            seed,
            samples,
            out,
        } => {
            let cfg = SuiteConfig {
                n,
                seed,
                samples,
                exec,
                ..SuiteConfig::default()
            };
            laws(&suite, &cfg, out.as_deref())
        }
        Command::Kpt { action } => kpt(action),
        Command::Kart { action } => kart(action),
        Command::Glue {
            stage,
            marked,
            g,
            i_max,
            out,
        } => glue(stage, &marked, &g, i_max, out.as_deref()),
        Command::Export { file, output, category } => export(&file, &output, category.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
