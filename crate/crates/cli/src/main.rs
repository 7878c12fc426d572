//! `tmcorr`: exact Thue–Morse correlations from the command line.
//!
//! Every subcommand emits records with the columns `query,args,exact,decimal`
//! as CSV (default) or JSON. Argument errors exit with status 2 and
//! resource-budget violations with 3; any other failure exits with 1.

mod params;
mod record;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use tmcorr::asymptotics::{
    abs_hypercube_mean, abs_power_mean_eta, exponent_bound, hypercube_mean, power_mean_eta,
    power_mean_mu, AbsScaling, DEFAULT_CUBE_BUDGET, MAX_EXPONENT_DEPTH,
};
use tmcorr::matrix::{b_matrices, b_matrix_kronecker, b_sum, RationalMatrix, RegularSequence};
use tmcorr::oracle::birkhoff_estimate;
use tmcorr::pair::PmSign;
use tmcorr::rational::{int, parse_rational};
use tmcorr::sequence::DEFAULT_PREFIX_CAP;
use tmcorr::{
    canonicalize, Correlator, Error, MemoStore, Rational, Result, WeightPair, DEFAULT_MAX_ORDER,
};

use params::{parse_list, Params};
use record::{emit, Format, Record};

/// Largest order accepted by `weighted`; the expansion visits `2^n` subsets.
const MAX_CLI_WEIGHTED_ORDER: usize = 10;

#[derive(Parser, Debug)]
#[command(
    name = "tmcorr",
    version,
    about = "Exact correlations of the Thue-Morse system"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Significant digits of the decimal column.
    #[arg(long, default_value_t = 12, global = true)]
    digits: usize,

    /// Largest correlation order the evaluator accepts.
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER, global = true)]
    max_order: usize,

    /// Largest digit depth for `exponent`.
    #[arg(long, default_value_t = MAX_EXPONENT_DEPTH, global = true)]
    max_j: u32,

    /// Largest number of lattice points summed by hypercube means.
    #[arg(long, default_value_t = DEFAULT_CUBE_BUDGET, global = true)]
    cube_budget: u128,

    /// Longest sequence prefix the oracles may generate.
    #[arg(long, env = "TMCORR_PREFIX_CAP", default_value_t = DEFAULT_PREFIX_CAP, global = true)]
    prefix_cap: usize,

    /// Memo cache loaded on start and saved on successful exit.
    #[arg(long, env = "TMCORR_MEMO", global = true)]
    memo: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pair correlation η(m).
    Pair {
        #[arg(allow_hyphen_values = true)]
        m: i64,
    },
    /// n-point correlation η(m₁,…,m_{n-1}) for comma-separated lags.
    Npoint {
        #[arg(long, allow_hyphen_values = true)]
        lags: String,
    },
    /// Correlation for letter weights f(-1), f(+1).
    Weighted {
        #[arg(long, allow_hyphen_values = true)]
        f_minus: String,
        #[arg(long, allow_hyphen_values = true)]
        f_plus: String,
        #[arg(long, allow_hyphen_values = true)]
        lags: String,
    },
    /// Period-doubling autocorrelation η(1, m, m+1).
    Pd {
        #[arg(allow_hyphen_values = true)]
        m: i64,
    },
    /// Finite means over m < N.
    Means {
        #[arg(long, value_enum)]
        kind: MeanKind,
        /// Comma-separated `key=value` pairs, for example `k=2,N=1024`.
        #[arg(long, default_value = "")]
        params: String,
        /// Comma-separated lengths; emits one record per length, overriding `N`.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Exponent bound c_j and α_j.
    Exponent {
        #[arg(long)]
        j: u32,
    },
    /// B-matrix entries as num/den.
    Matrices {
        #[arg(long)]
        n: usize,
        /// Bit pattern such as `0,1,1`; all matrices when omitted.
        #[arg(long, conflicts_with = "sum")]
        bits: Option<String>,
        /// The sum of all B-matrices.
        #[arg(long)]
        sum: bool,
    },
    /// Regular sequence η_n(m), or its mean over j < M with `--cesaro`.
    Regseq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: String,
        #[arg(long)]
        cesaro: bool,
    },
    /// Birkhoff average over a finite Thue–Morse prefix.
    Oracle {
        #[arg(long, allow_hyphen_values = true)]
        lags: String,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-1")]
        f_minus: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        f_plus: String,
    },
    /// Memo cache maintenance.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
        path: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MeanKind {
    /// (1/N) Σ η(m)^k; params k, N.
    EtaPower,
    /// (1/N) Σ μ±(m)^k; params sign (+ or -), k, N.
    MuPower,
    /// N^{-α} Σ |η(m)|^β; params N, alpha (default 1), beta (default 1).
    Abs,
    /// (1/N) Σ η(m)²; param N.
    Wiener,
    /// Hypercube mean of order n; params n and N, plus alpha or beta for
    /// the absolute-value variant.
    Hypercube,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CacheAction {
    /// Merge a cache file into the session memo and list its entries.
    Load,
    /// Write the session memo to a cache file.
    Save,
    /// Reset a cache file to an empty, valid cache.
    Clear,
}

struct Session {
    cli: Cli,
    correlator: Correlator,
}

impl Session {
    fn digits(&self) -> usize {
        self.cli.digits
    }

    fn rational(&self, query: &str, args: String, value: &Rational) -> Record {
        Record::rational(query, args, value, self.digits())
    }

    fn run(&self) -> Result<Vec<Record>> {
        match &self.cli.command {
            Command::Pair { m } => {
                let v = self.correlator.eta_pair(*m);
                Ok(vec![self.rational("pair", format!("m={m}"), &v)])
            }
            Command::Npoint { lags } => {
                let raw = parse_list::<i64>(lags)?;
                let key = canonicalize(&raw)?;
                let v = self.correlator.eta_n(&key)?;
                Ok(vec![self.rational("npoint", format!("lags={key}"), &v)])
            }
            Command::Weighted {
                f_minus,
                f_plus,
                lags,
            } => {
                let f = WeightPair::new(parse_rational(f_minus)?, parse_rational(f_plus)?);
                let raw = parse_list::<i64>(lags)?;
                if raw.len() + 1 > MAX_CLI_WEIGHTED_ORDER {
                    return Err(Error::BudgetExceeded {
                        what: "weighted correlation order",
                        requested: (raw.len() + 1) as u128,
                        cap: MAX_CLI_WEIGHTED_ORDER as u128,
                    });
                }
                let v = self.correlator.eta_f_general(&f, &raw)?;
                let args = format!("f_minus={} f_plus={} lags={lags}", f.f_minus, f.f_plus);
                Ok(vec![self.rational("weighted", args, &v)])
            }
            Command::Pd { m } => {
                let v = self.correlator.eta_pd(*m)?;
                Ok(vec![self.rational("pd", format!("m={m}"), &v)])
            }
            Command::Means {
                kind,
                params,
                sweep,
            } => self.means(*kind, params, sweep.as_deref()),
            Command::Exponent { j } => {
                if *j > self.cli.max_j {
                    return Err(Error::BudgetExceeded {
                        what: "exponent digit depth",
                        requested: *j as u128,
                        cap: self.cli.max_j as u128,
                    });
                }
                let r = exponent_bound(*j)?;
                Ok(vec![
                    self.rational("exponent.c", format!("j={j}"), &r.c),
                    Record::real("exponent.alpha", format!("j={j}"), r.alpha, self.digits()),
                ])
            }
            Command::Matrices { n, bits, sum } => self.matrices(*n, bits.as_deref(), *sum),
            Command::Regseq { n, m, cesaro } => {
                let seq = RegularSequence::new(*n)?;
                let m_big: BigUint = m.parse().map_err(|_| {
                    Error::InvalidArgument(format!("{m:?} is not a non-negative integer"))
                })?;
                if *cesaro {
                    let count: u64 = m.parse().map_err(|_| {
                        Error::InvalidArgument(format!("mean length {m} out of range"))
                    })?;
                    let v = seq.cesaro(count)?;
                    Ok(vec![self.rational(
                        "regseq.cesaro",
                        format!("n={n} M={m}"),
                        &v,
                    )])
                } else {
                    let v = seq.eval(&m_big);
                    Ok(vec![self.rational("regseq", format!("n={n} m={m}"), &v)])
                }
            }
            Command::Oracle {
                lags,
                n,
                f_minus,
                f_plus,
            } => {
                let f = WeightPair::new(parse_rational(f_minus)?, parse_rational(f_plus)?);
                let raw = parse_list::<u64>(lags)?;
                let est = birkhoff_estimate(&f, &raw, *n, self.cli.prefix_cap)?;
                let args = format!(
                    "lags={lags} N={n} f_minus={} f_plus={}",
                    f.f_minus, f.f_plus
                );
                Ok(vec![self.rational("oracle", args, &est.exact)])
            }
            Command::Cache { action, path } => self.cache(*action, path),
        }
    }

    fn means(&self, kind: MeanKind, params: &str, sweep: Option<&str>) -> Result<Vec<Record>> {
        let lengths: Vec<Option<String>> = match sweep {
            Some(list) => parse_list::<usize>(list)?
                .into_iter()
                .map(|n| Some(n.to_string()))
                .collect(),
            None => vec![None],
        };
        let mut records = Vec::with_capacity(lengths.len());
        for length in lengths {
            let mut p = Params::parse(params)?;
            if let Some(n) = length {
                p.set("N", n);
            }
            records.push(self.mean(kind, &p)?);
        }
        Ok(records)
    }

    fn mean(&self, kind: MeanKind, p: &Params) -> Result<Record> {
        let args = p.render();
        match kind {
            MeanKind::EtaPower => {
                p.only(&["k", "N"])?;
                let v = power_mean_eta(p.integer("k")?, p.integer("N")?)?;
                Ok(self.rational("means.eta-power", args, &v))
            }
            MeanKind::MuPower => {
                p.only(&["sign", "k", "N"])?;
                let sign = match p.raw("sign") {
                    Some("+") | Some("plus") => PmSign::Plus,
                    Some("-") | Some("minus") => PmSign::Minus,
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "sign must be + or -, got {other:?}"
                        )));
                    }
                };
                let v = power_mean_mu(sign, p.integer("k")?, p.integer("N")?)?;
                Ok(self.rational("means.mu-power", args, &v))
            }
            MeanKind::Abs => {
                p.only(&["N", "alpha", "beta"])?;
                let alpha = p.rational("alpha")?.unwrap_or_else(|| int(1));
                let beta = p.rational("beta")?.unwrap_or_else(|| int(1));
                let v = abs_power_mean_eta(&beta, p.integer("N")?, &alpha)?;
                Ok(Record::real("means.abs", args, v, self.digits()))
            }
            MeanKind::Wiener => {
                p.only(&["N"])?;
                let v = power_mean_eta(2, p.integer("N")?)?;
                Ok(self.rational("means.wiener", args, &v))
            }
            MeanKind::Hypercube => {
                p.only(&["n", "N", "alpha", "beta"])?;
                let (order, side) = (p.integer("n")?, p.integer("N")?);
                let budget = self.cli.cube_budget;
                match (p.rational("alpha")?, p.rational("beta")?) {
                    (None, None) => {
                        let v = hypercube_mean(order, side, budget)?;
                        Ok(self.rational("means.hypercube", args, &v))
                    }
                    (Some(a), None) => {
                        let v = abs_hypercube_mean(order, side, &AbsScaling::Alpha(a), budget)?;
                        Ok(Record::real("means.hypercube-abs", args, v, self.digits()))
                    }
                    (None, Some(b)) => {
                        let v = abs_hypercube_mean(order, side, &AbsScaling::Beta(b), budget)?;
                        Ok(Record::real("means.hypercube-abs", args, v, self.digits()))
                    }
                    (Some(_), Some(_)) => Err(Error::InvalidArgument(
                        "give alpha or beta, not both".into(),
                    )),
                }
            }
        }
    }

    fn matrices(&self, n: usize, bits: Option<&str>, sum: bool) -> Result<Vec<Record>> {
        let labelled: Vec<(String, RationalMatrix)> = if sum {
            vec![("sum".to_string(), b_sum(n)?)]
        } else if let Some(bits) = bits {
            let parsed = parse_list::<u8>(bits)?;
            vec![(bits_label(&parsed), b_matrix_kronecker(&parsed, n)?)]
        } else {
            b_matrices(n)?
                .into_iter()
                .enumerate()
                .map(|(i, m)| (bits_label(&tmcorr::matrix::index_bits(i, n)), m))
                .collect()
        };
        let mut records = Vec::new();
        for (label, m) in labelled {
            for row in 0..m.dim() {
                for col in 0..m.dim() {
                    let args = format!("n={n} bits={label} row={row} col={col}");
                    records.push(self.rational("matrix", args, &m.get(row, col)));
                }
            }
        }
        Ok(records)
    }

    fn cache(&self, action: CacheAction, path: &Path) -> Result<Vec<Record>> {
        let memo = self.correlator.memo();
        let where_ = path.display();
        match action {
            CacheAction::Load => {
                let staged = MemoStore::new();
                staged.load(path)?;
                let mut records = Vec::with_capacity(staged.len());
                for (key, value) in staged.entries() {
                    records.push(self.rational("cache.entry", format!("lags={key}"), &value));
                    memo.insert(key, value);
                }
                Ok(records)
            }
            CacheAction::Save => {
                let count = memo.save(path)?;
                Ok(vec![self.rational(
                    "cache.save",
                    format!("path={where_}"),
                    &int(count as i64),
                )])
            }
            CacheAction::Clear => {
                MemoStore::new().save(path)?;
                memo.clear();
                Ok(vec![self.rational(
                    "cache.clear",
                    format!("path={where_}"),
                    &int(0),
                )])
            }
        }
    }
}

fn bits_label(bits: &[u8]) -> String {
    bits.iter().map(|b| b.to_string()).collect()
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::CacheFormat { .. } => 2,
        Error::BudgetExceeded { .. } => 3,
        Error::Invariant(_) | Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let memo = Arc::new(MemoStore::new());
    if let Some(path) = &cli.memo {
        if path.exists() {
            if let Err(e) = memo.load(path) {
                eprintln!("tmcorr: {e}");
                return ExitCode::from(exit_code(&e));
            }
        }
    }
    let correlator = Correlator::with_memo(Arc::clone(&memo)).max_order(cli.max_order);
    let session = Session { cli, correlator };

    let outcome = session.run().and_then(|records| {
        let stdout = std::io::stdout();
        emit(&records, session.cli.format, stdout.lock())?;
        // Clearing the file named by TMCORR_MEMO must not be undone on exit.
        let cleared_memo_file = matches!(
            &session.cli.command,
            Command::Cache { action: CacheAction::Clear, path } if Some(path) == session.cli.memo.as_ref()
        );
        if let Some(path) = &session.cli.memo {
            if !cleared_memo_file {
                memo.save(path)?;
            }
        }
        Ok(())
    });

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tmcorr: {e}");
            if matches!(e, Error::InvalidArgument(_)) {
                eprintln!("{}", Cli::command().render_usage());
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
