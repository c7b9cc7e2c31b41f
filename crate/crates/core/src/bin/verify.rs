use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use kruglov::verify::{run, Params, Verdict, VerificationReport};

/// Checks the inequalities around the Kruglov operator and prints JSON
/// reports. Exit status: 0 pass, 1 fail, 2 inconclusive, 3 error.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Cli {
    /// lemma5, lemma6, lemma7, remark-counterexample, lemma2, theorem1,
    /// criterion, theorem8, corollary12, corollary13, corollary10, or all
    claim: String,
    /// Dimension, or a comma-separated list of dimensions
    #[arg(long)]
    n: Option<String>,
    #[arg(long = "m-max")]
    m_max: Option<String>,
    /// Comma-separated ε values, exact rationals allowed
    #[arg(long)]
    eps: Option<String>,
    /// Gauge such as power:1/2, triple-log, eps-family:1/10:4; `;`-separated
    #[arg(long)]
    gauge: Option<String>,
    /// Orlicz exponent(s), comma-separated
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long = "tail-tol")]
    tail_tol: Option<String>,
    #[arg(long = "value-cap")]
    value_cap: Option<String>,
    /// Norm spec (l1, linf, explog, orlicz:p, lorentz:<gauge>,
    /// marcinkiewicz:<gauge>), `;`-separated
    #[arg(long)]
    space: Option<String>,
    /// Vectors like "1,2;3,1,0,2"
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    battery: Option<String>,
    /// Matrix rows separated by `;`
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Config file of key = value lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write evidence rows as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl Cli {
    fn params(&self) -> kruglov::Result<Params> {
        let mut p = match &self.config {
            Some(path) => Params::from_config_file(path)?,
            None => Params::new(),
        };
        let flags = [
            ("n", &self.n),
            ("m-max", &self.m_max),
            ("eps", &self.eps),
            ("gauge", &self.gauge),
            ("p", &self.p),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("tail-tol", &self.tail_tol),
            ("value-cap", &self.value_cap),
            ("space", &self.space),
            ("a", &self.a),
            ("battery", &self.battery),
            ("matrix", &self.matrix),
            ("grid", &self.grid),
            ("tol", &self.tol),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                p.set(k, v.as_str());
            }
        }
        Ok(p)
    }
}

fn emit(cli: &Cli, reports: &[VerificationReport]) -> kruglov::Result<()> {
    let json = if cli.claim == "all" {
        serde_json::to_string_pretty(reports)
    } else {
        serde_json::to_string_pretty(&reports[0])
    }
    .map_err(|e| kruglov::Error::Io(e.to_string()))?;
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            writeln!(w, "{json}")?;
            w.flush()?;
        }
        None => writeln!(io::stdout().lock(), "{json}")?,
    }
    if let Some(path) = &cli.csv {
        VerificationReport::write_csv(reports, BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let outcome = cli.params().and_then(|p| run(&cli.claim, &p)).and_then(|r| {
        emit(&cli, &r)?;
        Ok(r)
    });
    match outcome {
        Ok(reports) => {
            for r in &reports {
                eprintln!("{}: {} ({} rows, {} ms)", r.claim_id, r.verdict, r.evidence.len(), r.runtime_ms);
            }
            ExitCode::from(Verdict::exit_code(reports.iter().map(|r| &r.verdict)) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
