//! Command-line front end: chord analysis, triad-space maps, WAV rendering
//! and the reference power table.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chord_affect::affect::{emotional_power_with, PowerConfig, PowerReport};
use chord_affect::consonance::{chord_consonant, IntervalQuality, Verdict};
use chord_affect::grid::{emit_grid, generate_grid, GridFormat};
use chord_affect::pitch::PitchInput;
use chord_affect::proportion::Proportion;
use chord_affect::rationalize::{
    rationalize, semitones_to_freqs, RationalizeConfig, RationalizeError,
};
use chord_affect::synth::{matched_pair, render_chord, write_wav, RenderSpec};

#[derive(Parser)]
#[command(
    name = "chordaffect",
    version,
    about = "Analyze chord pitch proportions: major/minor classification, emotional power, consonance, triad maps, audio"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one chord given as proportion text, frequencies, semitones or note names
    Analyze(AnalyzeArgs),
    /// Sweep the 12-TET triad space and emit it as CSV or a pixmap
    Grid(GridArgs),
    /// Render a chord, or a mean-matched pair of chords, to WAV
    Wav(WavArgs),
    /// Print the reference table of main and side powers
    Table(TableArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GridOutputFormat {
    Csv,
    Image,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Proportion text, e.g. 4:5:6, /6:/5:/4 or /4:/2:1
    proportion: Option<String>,
    /// Voice frequencies in Hz, comma-separated
    #[arg(long, value_delimiter = ',')]
    freqs: Option<Vec<f64>>,
    /// Semitone offsets from the root, comma-separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    semitones: Option<Vec<f64>>,
    /// Note names such as C4,E4,G4
    #[arg(long, value_delimiter = ',')]
    notes: Option<Vec<String>>,
    /// Root frequency for --semitones
    #[arg(long)]
    root: Option<f64>,
    /// Relative rationalization tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Term search ceiling for rationalization
    #[arg(long)]
    max_term: Option<u64>,
    /// Near-symmetry threshold on the main/side amplitude gap
    #[arg(long)]
    near_sym_threshold: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Key-value file with defaults (tolerance, max_term, root, ...)
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Upper bound of the semitone sweep
    #[arg(long, default_value_t = 12)]
    jmax: u8,
    /// Relative rationalization tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Term search ceiling
    #[arg(long)]
    max_term: Option<u64>,
    /// Root frequency of the sweep
    #[arg(long)]
    root: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: GridOutputFormat,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct WavArgs {
    /// Proportion text; give twice for a mean-matched pair
    #[arg(long = "prop")]
    props: Vec<String>,
    /// Voice frequencies in Hz, comma-separated
    #[arg(long, value_delimiter = ',')]
    freqs: Option<Vec<f64>>,
    /// Semitone offsets from the root, comma-separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    semitones: Option<Vec<f64>>,
    /// Root frequency for --semitones
    #[arg(long)]
    root: Option<f64>,
    /// Target arithmetic-mean frequency
    #[arg(long)]
    mean: Option<f64>,
    /// Partials per voice; 1 renders pure tones
    #[arg(long)]
    harmonics: Option<u32>,
    /// Duration in seconds
    #[arg(long)]
    dur: Option<f64>,
    /// Sample rate in Hz
    #[arg(long)]
    sr: Option<u32>,
    /// Peak level as a fraction of full scale
    #[arg(long)]
    peak: Option<f64>,
    /// Fade-in/out in milliseconds
    #[arg(long)]
    fade: Option<f64>,
    /// Output path; pairs get -a/-b suffixes
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {}

/// Errors mapped to exit codes: input problems exit 2, a failed
/// proportion search exits 3, unexpected I/O failures exit 1.
enum CliError {
    Input(String),
    NoProportion(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::NoProportion(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::NoProportion(m) | CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<RationalizeError> for CliError {
    fn from(e: RationalizeError) -> Self {
        match e {
            RationalizeError::NoProportionFound => CliError::NoProportion(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Defaults that a --config file may override.
#[derive(Clone, Debug)]
struct FileDefaults {
    tolerance: Option<f64>,
    max_term: Option<u64>,
    near_sym_threshold: Option<f64>,
    sample_rate: Option<u32>,
    root: Option<f64>,
    mean: Option<f64>,
}

impl FileDefaults {
    fn empty() -> FileDefaults {
        FileDefaults {
            tolerance: None,
            max_term: None,
            near_sym_threshold: None,
            sample_rate: None,
            root: None,
            mean: None,
        }
    }

    /// Parse `key = value` lines; `#` starts a comment.
    fn load(path: &Path) -> Result<FileDefaults, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("reading {}: {e}", path.display())))?;
        let mut out = FileDefaults::empty();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Input(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                CliError::Input(format!(
                    "{}:{}: bad {what} value {value:?}",
                    path.display(),
                    lineno + 1
                ))
            };
            match key {
                "tolerance" => out.tolerance = Some(value.parse().map_err(|_| bad(key))?),
                "max_term" => out.max_term = Some(value.parse().map_err(|_| bad(key))?),
                "near_symmetric_threshold" => {
                    out.near_sym_threshold = Some(value.parse().map_err(|_| bad(key))?)
                }
                "sample_rate" => out.sample_rate = Some(value.parse().map_err(|_| bad(key))?),
                "root" => out.root = Some(value.parse().map_err(|_| bad(key))?),
                "mean" => out.mean = Some(value.parse().map_err(|_| bad(key))?),
                other => {
                    return Err(CliError::Input(format!(
                        "{}:{}: unknown key {other:?}",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(out)
    }
}

fn load_defaults(path: &Option<PathBuf>) -> Result<FileDefaults, CliError> {
    match path {
        Some(p) => FileDefaults::load(p),
        None => Ok(FileDefaults::empty()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Grid(args) => run_grid(args),
        Command::Wav(args) => run_wav(args),
        Command::Table(_) => run_table(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn round2(x: f64) -> f64 {
    let r = (x * 100.0).round() / 100.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn search_config(
    tol: Option<f64>,
    max_term: Option<u64>,
    defaults: &FileDefaults,
    base: &RationalizeConfig,
) -> Result<RationalizeConfig, CliError> {
    let tol = tol.or(defaults.tolerance).unwrap_or(base.tolerance());
    let max_term = max_term.or(defaults.max_term).unwrap_or(base.max_term());
    RationalizeConfig::new(tol, max_term, base.max_voices()).map_err(|e| e.into())
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let defaults = load_defaults(&args.config)?;
    let mut inputs = 0;
    for present in [
        args.proportion.is_some(),
        args.freqs.is_some(),
        args.semitones.is_some(),
        args.notes.is_some(),
    ] {
        inputs += present as usize;
    }
    if inputs != 1 {
        return Err(CliError::Input(
            "give exactly one input: proportion text, --freqs, --semitones or --notes".into(),
        ));
    }

    let cfg = search_config(
        args.tol,
        args.max_term,
        &defaults,
        &RationalizeConfig::default(),
    )?;
    let root = args.root.or(defaults.root).unwrap_or(261.63);

    let (input_echo, proportion) = if let Some(text) = &args.proportion {
        let p: Proportion = text
            .parse()
            .map_err(|e: chord_affect::ProportionParseError| CliError::Input(e.to_string()))?;
        (text.clone(), p)
    } else {
        let (echo, input) = if let Some(freqs) = args.freqs.clone() {
            (format!("freqs {freqs:?}"), PitchInput::Frequencies(freqs))
        } else if let Some(offsets) = args.semitones.clone() {
            (
                format!("semitones {offsets:?}"),
                PitchInput::Semitones(offsets),
            )
        } else {
            let names = args.notes.clone().expect("checked above");
            (format!("notes {names:?}"), PitchInput::Names(names))
        };
        let freqs = input
            .frequencies(root)
            .map_err(|e| CliError::Input(e.to_string()))?;
        (echo, rationalize(&freqs, &cfg)?)
    };

    let power_cfg = PowerConfig {
        near_symmetric_threshold: args
            .near_sym_threshold
            .or(defaults.near_sym_threshold)
            .unwrap_or(PowerConfig::default().near_symmetric_threshold),
        ..PowerConfig::default()
    };
    let report = emotional_power_with(&proportion, &power_cfg);
    let (consonant, intervals) = chord_consonant(&proportion);

    match args.format {
        OutputFormat::Json => {
            let value = analysis_json(&input_echo, &proportion, &report, consonant, &intervals);
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("valid json")
            );
        }
        OutputFormat::Text => {
            print!(
                "{}",
                analysis_text(&input_echo, &proportion, &report, consonant, &intervals)
            );
        }
    }
    Ok(())
}

fn verdict_json(q: &IntervalQuality) -> Value {
    match q.verdict {
        Verdict::Consonant { rank } => json!({ "verdict": "consonant", "rank": rank }),
        Verdict::DissonantListed => json!({ "verdict": "dissonant", "listed": true }),
        Verdict::DissonantUnlisted => json!({ "verdict": "dissonant", "listed": false }),
    }
}

fn analysis_json(
    input: &str,
    p: &Proportion,
    report: &PowerReport,
    consonant: bool,
    intervals: &[(usize, usize, IntervalQuality)],
) -> Value {
    let products = p.products();
    let interval_rows: Vec<Value> = intervals
        .iter()
        .map(|(i, j, q)| {
            let mut row = verdict_json(q);
            let obj = row.as_object_mut().expect("object");
            obj.insert("voices".into(), json!([i + 1, j + 1]));
            obj.insert("ratio".into(), json!(q.ratio.to_string()));
            obj.insert("reduced".into(), json!(q.reduced.to_string()));
            row
        })
        .collect();
    json!({
        "input": input,
        "proportion": p.to_string(),
        "inverse": p.inverse_writing(),
        "terms": p.terms(),
        "inverse_terms": p
            .inverse_numbers()
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>(),
        "p_dir": products.p_dir.to_string(),
        "p_inv": products.p_inv.to_string(),
        "class": report.classification.to_string(),
        "pwe_main": round6(report.pwe_main),
        "pwe_side": round6(report.pwe_side),
        "pwe_adjusted": round6(report.pwe_adjusted),
        "near_symmetric": report.near_symmetric,
        "valence_valid": report.valence_valid,
        "band": report.band.to_string(),
        "consonant": consonant,
        "intervals": interval_rows,
    })
}

fn analysis_text(
    input: &str,
    p: &Proportion,
    report: &PowerReport,
    consonant: bool,
    intervals: &[(usize, usize, IntervalQuality)],
) -> String {
    let products = p.products();
    let mut out = String::new();
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    out.push_str(&format!("input           {input}\n"));
    out.push_str(&format!(
        "proportion      {p}   (inverse {})\n",
        p.inverse_writing()
    ));
    out.push_str(&format!(
        "products        direct {}   inverse {}\n",
        products.p_dir, products.p_inv
    ));
    out.push_str(&format!("class           {}\n", report.classification));
    out.push_str(&format!(
        "pwe             main {:.6}   side {:.6}   adjusted {:.6}\n",
        report.pwe_main, report.pwe_side, report.pwe_adjusted
    ));
    out.push_str(&format!(
        "near symmetric  {}\n",
        yes_no(report.near_symmetric)
    ));
    out.push_str(&format!(
        "valence valid   {}\n",
        yes_no(report.valence_valid)
    ));
    out.push_str(&format!("band            {}\n", report.band));
    out.push_str(&format!("consonant       {}\n", yes_no(consonant)));
    for (i, j, q) in intervals {
        out.push_str(&format!(
            "interval {}-{}    {} (reduced {}): {}\n",
            i + 1,
            j + 1,
            q.ratio,
            q.reduced,
            q.verdict
        ));
    }
    out
}

fn run_grid(args: GridArgs) -> Result<(), CliError> {
    let defaults = load_defaults(&args.config)?;
    let base = chord_affect::grid::default_grid_config();
    let cfg = search_config(args.tol, args.max_term, &defaults, &base)?;
    let root = args.root.or(defaults.root).unwrap_or(261.63);
    let cells =
        generate_grid(args.jmax, root, &cfg).map_err(|e| CliError::Input(e.to_string()))?;
    let format = match args.format {
        GridOutputFormat::Csv => GridFormat::Csv,
        GridOutputFormat::Image => GridFormat::Image,
    };
    let bytes = emit_grid(&cells, format);
    match &args.out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io(format!("writing stdout: {e}")))?,
    }
    Ok(())
}

/// Derive `name-a.wav`, `name-b.wav` from `name.wav`.
fn pair_path(out: &Path, suffix: char) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "chord".into());
    let ext = out
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "wav".into());
    out.with_file_name(format!("{stem}-{suffix}.{ext}"))
}

fn rescale_to_mean(freqs: &mut [f64], mean: f64) -> Result<(), CliError> {
    if mean <= 0.0 || !mean.is_finite() {
        return Err(CliError::Input("mean frequency must be positive".into()));
    }
    let current: f64 = freqs.iter().sum::<f64>() / freqs.len() as f64;
    for f in freqs.iter_mut() {
        *f *= mean / current;
    }
    Ok(())
}

fn run_wav(args: WavArgs) -> Result<(), CliError> {
    let defaults = load_defaults(&args.config)?;
    if args.props.len() > 2 {
        return Err(CliError::Input("at most two --prop chords".into()));
    }
    let mut inputs = 0;
    for present in [
        !args.props.is_empty(),
        args.freqs.is_some(),
        args.semitones.is_some(),
    ] {
        inputs += present as usize;
    }
    if inputs != 1 {
        return Err(CliError::Input(
            "give exactly one input: --prop, --freqs or --semitones".into(),
        ));
    }

    let root = args.root.or(defaults.root).unwrap_or(261.63);
    let mean = args.mean.or(defaults.mean);

    let voice_sets: Vec<Vec<f64>> = if !args.props.is_empty() {
        let mut parsed = Vec::new();
        for text in &args.props {
            let p: Proportion = text
                .parse()
                .map_err(|e: chord_affect::ProportionParseError| CliError::Input(e.to_string()))?;
            parsed.push(p);
        }
        // Proportions carry no absolute pitch; anchor them on the mean.
        let mean = mean.unwrap_or(400.0);
        if parsed.len() == 2 {
            let (a, b) = matched_pair(&parsed[0], &parsed[1], mean)
                .map_err(|e| CliError::Input(e.to_string()))?;
            vec![a, b]
        } else {
            let (a, _) = matched_pair(&parsed[0], &parsed[0], mean)
                .map_err(|e| CliError::Input(e.to_string()))?;
            vec![a]
        }
    } else if let Some(freqs) = &args.freqs {
        let mut freqs = freqs.clone();
        if freqs.is_empty() {
            return Err(CliError::Input("no frequencies given".into()));
        }
        if let Some(m) = mean {
            rescale_to_mean(&mut freqs, m)?;
        }
        vec![freqs]
    } else {
        let offsets = args.semitones.as_ref().expect("checked above");
        let mut freqs = semitones_to_freqs(offsets, root)?;
        if let Some(m) = mean {
            rescale_to_mean(&mut freqs, m)?;
        }
        vec![freqs]
    };

    let spec_for = |freqs: &[f64]| RenderSpec {
        freqs: freqs.to_vec(),
        duration: args.dur.unwrap_or(2.0),
        sample_rate: args.sr.or(defaults.sample_rate).unwrap_or(44_100),
        peak: args.peak.unwrap_or(0.5),
        harmonics: args.harmonics.unwrap_or(1),
        fade_ms: args.fade.unwrap_or(10.0),
    };

    let paths: Vec<PathBuf> = if voice_sets.len() == 2 {
        vec![pair_path(&args.out, 'a'), pair_path(&args.out, 'b')]
    } else {
        vec![args.out.clone()]
    };

    let mut summary = Vec::new();
    for (freqs, path) in voice_sets.iter().zip(&paths) {
        let spec = spec_for(freqs);
        let buffer = render_chord(&spec).map_err(|e| CliError::Input(e.to_string()))?;
        write_wav(&buffer, spec.sample_rate, spec.peak, path)
            .map_err(|e| CliError::Io(e.to_string()))?;
        summary.push(json!({
            "path": path.display().to_string(),
            "freqs": freqs,
            "samples": buffer.len(),
            "sample_rate": spec.sample_rate,
        }));
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({ "files": summary })).expect("valid json")
    );
    Ok(())
}

/// The reference chord list, in table order.
const TABLE_ROWS: &[&str] = &[
    "1:1:1",
    "1:2:4",
    "4:6:9",
    "16:20:25",
    "1:2:3",
    "2:3:4",
    "2:3:5",
    "2:3:8",
    "2:4:5",
    "2:5:6",
    "2:5:8",
    "3:4:5",
    "/3:/4:/5",
    "3:4:6",
    "3:4:8",
    "3:5:6",
    "3:5:8",
    "3:6:8",
    "4:5:6",
    "/4:/5:/6",
    "4:5:8",
    "5:6:8",
    "4:5:7",
    "5:6:7",
    "1:2:3:4",
    "2:3:4:5",
    "3:4:5:6",
    "4:5:6:8",
];

/// Show the side power only when its amplitude comes within 0.6 of the
/// main amplitude.
const TABLE_SIDE_WINDOW: f64 = 0.6;

fn run_table() -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<12} {:<18} {:>8} {:>9}  {}\n",
        "proportion", "other writing", "pwe_main", "pwe_side", "note"
    ));
    for text in TABLE_ROWS {
        let p: Proportion = text.parse().expect("table rows are well-formed");
        let report = emotional_power_with(&p, &PowerConfig::default());
        let other = if text.starts_with('/') {
            p.to_string()
        } else {
            p.inverse_writing()
        };
        let side = if report.pwe_side.abs() - report.pwe_main.abs() < TABLE_SIDE_WINDOW {
            format!("{:.2}", round2(report.pwe_side))
        } else {
            String::new()
        };
        let note = if report.classification == chord_affect::Classification::Symmetric {
            "symmetric"
        } else if report.near_symmetric {
            "near-symmetric"
        } else {
            ""
        };
        let line = format!(
            "{:<12} {:<18} {:>8.2} {:>9}  {}",
            text,
            other,
            round2(report.pwe_main),
            side,
            note
        );
        out.push_str(line.trim_end());
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_paths() {
        assert_eq!(
            pair_path(Path::new("out/pair.wav"), 'a'),
            PathBuf::from("out/pair-a.wav")
        );
        assert_eq!(
            pair_path(Path::new("chord"), 'b'),
            PathBuf::from("chord-b.wav")
        );
    }

    #[test]
    fn table_rows_parse() {
        for text in TABLE_ROWS {
            text.parse::<Proportion>().unwrap();
        }
    }
}
