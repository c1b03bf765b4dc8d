//! `lalg`: enumerate, verify and classify finite L-algebras.
//!
//! Exit status: 0 on success, 1 when input fails validation, 2 on usage
//! errors.

use std::fs::{self, File, OpenOptions};
use std::hash::{DefaultHasher, Hash, Hasher};
use std::io::{self, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use lalgebra::dbio::{self, DbSummary, Records};
use lalgebra::linear::{bell, enumerate_linear};
use lalgebra::poset::{enumerate_posets, format_posets};
use lalgebra::search::{class_cases, count_cases, format_cases, parse_cases, run_cases, SearchCase, Strategy};
use lalgebra::young::{enumerate_young, format_diagrams};
use lalgebra::AlgebraClass;

#[derive(Parser)]
#[command(name = "lalg", version, about = "Finite L-algebras: enumeration, verification, classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// One search over the full symmetric group.
    General,
    /// Split by natural order and splitting structures.
    Split,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Exclude {
    Antichain,
    Diamond,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate one table per isomorphism class.
    Enumerate {
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value = "all")]
        class: AlgebraClass,
        #[arg(long, value_enum, default_value = "split")]
        mode: ModeArg,
        /// Worker threads; output does not depend on it.
        #[arg(long, env = "LALG_JOBS")]
        jobs: Option<usize>,
        /// Output file. Progress is checkpointed next to it, so an
        /// interrupted run resumes where it stopped.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run the cases of a job file instead of building them.
        #[arg(long)]
        cases: Option<PathBuf>,
        /// Print only the number of classes.
        #[arg(long)]
        count: bool,
    },
    /// Write the search cases of an enumeration as a job file.
    Cases {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value = "all")]
        class: AlgebraClass,
        #[arg(long, value_enum, default_value = "split")]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every record against the L-algebra axioms.
    Verify { file: PathBuf },
    /// Print the row-major least relabeling of every record.
    Canonical { file: PathBuf },
    /// Count records in a class.
    Count {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        class: AlgebraClass,
    },
    /// Copy records in a class to another file.
    Filter {
        file: PathBuf,
        #[arg(long)]
        class: AlgebraClass,
        #[arg(long)]
        out: PathBuf,
    },
    /// Keep the first record of each isomorphism class.
    Dedup {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Posets up to isomorphism.
    Posets {
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, value_delimiter = ',')]
        exclude: Vec<Exclude>,
        /// Print only the number of posets.
        #[arg(long)]
        count: bool,
    },
    /// Young diagrams up to conjugacy.
    Young {
        #[arg(long)]
        points: usize,
    },
    /// All linear L-algebras.
    Linear {
        #[arg(long)]
        size: usize,
    },
    /// The Bell number B(M).
    Bell { m: usize },
}

/// Bad arguments that clap cannot see.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Library argument errors are usage errors about `flag`.
fn lib(flag: &'static str) -> impl Fn(lalgebra::Error) -> anyhow::Error {
    move |e| match e {
        lalgebra::Error::Argument(msg) => usage(format!("{flag}: {msg}")),
        e => e.into(),
    }
}

/// Marks a run that completed but found invalid input.
#[derive(Debug)]
struct Invalid;

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("validation failed")
    }
}

impl std::error::Error for Invalid {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Invalid>() => ExitCode::from(1),
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn report_skipped(s: &DbSummary) -> anyhow::Result<()> {
    for k in &s.skipped {
        eprintln!("line {}: skipped: {}", k.line, k.reason);
    }
    if s.skipped.is_empty() {
        Ok(())
    } else {
        Err(Invalid.into())
    }
}

fn run(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::Enumerate {
            size,
            class,
            mode,
            jobs,
            out,
            cases,
            count,
        } => {
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            if jobs == 0 {
                return Err(usage("--jobs must be at least 1"));
            }
            let (cases, filter) = match cases {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
                    let cases = parse_cases(&text)?;
                    if let Some(n) = size {
                        if let Some(c) = cases.iter().find(|c| c.n != n) {
                            return Err(usage(format!("--size {n} disagrees with a case of size {}", c.n)));
                        }
                    }
                    let filter = match class {
                        AlgebraClass::All => None,
                        AlgebraClass::Hilbert if cases.iter().all(|c| c.hilbert) => None,
                        c => Some(c),
                    };
                    (cases, filter)
                }
                None => {
                    let n = size.ok_or_else(|| usage("--size is required unless --cases is given"))?;
                    build_cases(n, class, mode)?
                }
            };
            enumerate(&cases, filter, jobs, out.as_deref(), count)
        }
        Command::Cases { size, class, mode, out } => {
            let (cases, _) = build_cases(size, class, mode)?;
            let mut w = output(out.as_deref())?;
            w.write_all(format_cases(&cases).as_bytes())?;
            w.flush()?;
            Ok(())
        }
        Command::Verify { file } => {
            let (mut valid, mut invalid) = (0u64, 0u64);
            let mut w = output(None)?;
            for (line, rec) in Records::new(dbio::open(&file)?) {
                match rec {
                    Ok(m) => match m.verify().first_violation {
                        None => valid += 1,
                        Some(v) => {
                            invalid += 1;
                            writeln!(w, "line {line}: {v}")?;
                        }
                    },
                    Err(e) => {
                        invalid += 1;
                        writeln!(w, "line {line}: {e}")?;
                    }
                }
            }
            writeln!(w, "{valid} valid, {invalid} invalid")?;
            w.flush()?;
            if invalid > 0 {
                return Err(Invalid.into());
            }
            Ok(())
        }
        Command::Canonical { file } => {
            let mut w = output(None)?;
            let mut bad = false;
            for (line, rec) in Records::new(dbio::open(&file)?) {
                match rec.map(|m| (m.verify(), m)) {
                    Ok((r, m)) if r.valid() => writeln!(w, "{}", dbio::serialize(&m.canonical_form()))?,
                    Ok((r, _)) => {
                        bad = true;
                        eprintln!("line {line}: {}", r.first_violation.expect("invalid report has a witness"));
                    }
                    Err(e) => {
                        bad = true;
                        eprintln!("line {line}: {e}");
                    }
                }
            }
            w.flush()?;
            if bad {
                return Err(Invalid.into());
            }
            Ok(())
        }
        Command::Count { file, class } => {
            let s = dbio::count_path(&file, class)?;
            println!("{}", s.matched_decimal());
            report_skipped(&s)
        }
        Command::Filter { file, class, out } => {
            let s = dbio::filter_path(&file, class, &out)?;
            report_skipped(&s)
        }
        Command::Dedup { file, out } => {
            let s = dbio::dedup_path(&file, &out)?;
            report_skipped(&s)
        }
        Command::Posets { size, exclude, count } => {
            let ps: Vec<_> = enumerate_posets(size)
                .map_err(lib("--size"))?
                .into_iter()
                .filter(|p| !(exclude.contains(&Exclude::Antichain) && p.is_antichain()))
                .filter(|p| !(exclude.contains(&Exclude::Diamond) && p.is_diamond()))
                .collect();
            let mut w = output(None)?;
            if count {
                writeln!(w, "{}", ps.len())?;
            } else {
                w.write_all(format_posets(&ps).as_bytes())?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Young { points } => {
            let ds = enumerate_young(points).map_err(lib("--points"))?;
            let mut w = output(None)?;
            w.write_all(format_diagrams(&ds).as_bytes())?;
            w.flush()?;
            Ok(())
        }
        Command::Linear { size } => {
            let mut w = output(None)?;
            for x in enumerate_linear(size).map_err(lib("--size"))? {
                writeln!(w, "{}", dbio::serialize(x.table()))?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Bell { m } => {
            println!("{}", bell(m));
            Ok(())
        }
    }
}

fn build_cases(n: usize, class: AlgebraClass, mode: ModeArg) -> anyhow::Result<(Vec<SearchCase>, Option<AlgebraClass>)> {
    if n == 0 {
        return Err(usage("--size must be at least 1"));
    }
    if n > 16 {
        return Err(usage("--size must be at most 16"));
    }
    let strategy = match mode {
        ModeArg::General => Strategy::General,
        ModeArg::Split => Strategy::Split,
    };
    class_cases(n, class, strategy).map_err(lib("--size"))
}

/// Runs the cases and writes records, or their number, in case order.
/// With an output file, `<out>.progress` records how much is complete.
fn enumerate(cases: &[SearchCase], filter: Option<AlgebraClass>, jobs: usize, out: Option<&Path>, count: bool) -> anyhow::Result<()> {
    let Some(path) = out else {
        let mut w = output(None)?;
        if count {
            let mut total = 0u64;
            count_cases(cases, filter, jobs, |_, c| {
                total += c;
                Ok(())
            })?;
            writeln!(w, "{total}")?;
        } else {
            run_cases(cases, filter, jobs, |_, tables| {
                for m in &tables {
                    writeln!(w, "{}", dbio::serialize(m)).map_err(io_error)?;
                }
                Ok(())
            })?;
        }
        w.flush()?;
        return Ok(());
    };

    let progress = PathBuf::from(format!("{}.progress", path.display()));
    let mut hasher = DefaultHasher::new();
    format_cases(cases).hash(&mut hasher);
    filter.map(|f| f.name()).hash(&mut hasher);
    count.hash(&mut hasher);
    let fingerprint = format!("{:016x}", hasher.finish());

    // `mark` is the byte length of the output so far, or the running count
    let (done, mark) = match fs::read_to_string(&progress) {
        Ok(text) => {
            let f: Vec<&str> = text.split_whitespace().collect();
            match f[..] {
                [fp, d, b] if fp == fingerprint => (d.parse::<usize>()?, b.parse::<u64>()?),
                _ => bail!("{} belongs to a different run; remove it to start over", progress.display()),
            }
        }
        Err(_) => (0, 0),
    };
    let save = |done: usize, mark: u64| -> io::Result<()> {
        let tmp = PathBuf::from(format!("{}.tmp", progress.display()));
        fs::write(&tmp, format!("{fingerprint} {done} {mark}\n"))?;
        fs::rename(&tmp, &progress)
    };
    save(done, mark).map_err(io_error)?;
    let mut mark = mark;

    if count {
        count_cases(&cases[done..], filter, jobs, |i, c| {
            mark += c;
            save(done + i + 1, mark).map_err(io_error)
        })?;
        fs::write(path, format!("{mark}\n")).with_context(|| format!("cannot write {}", path.display()))?;
    } else {
        let mut file = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(done == 0)
            .open(path)
            .with_context(|| format!("cannot open {}", path.display()))?;
        file.set_len(mark)?;
        file.seek(SeekFrom::Start(mark))?;
        let mut w = BufWriter::new(file);
        run_cases(&cases[done..], filter, jobs, |i, tables| {
            for m in &tables {
                let line = dbio::serialize(m) + "\n";
                w.write_all(line.as_bytes()).map_err(io_error)?;
                mark += line.len() as u64;
            }
            w.flush().map_err(io_error)?;
            save(done + i + 1, mark).map_err(io_error)
        })?;
    }
    fs::remove_file(&progress)?;
    Ok(())
}

fn io_error(e: io::Error) -> lalgebra::Error {
    lalgebra::Error::Io {
        path: "output".into(),
        msg: e.to_string(),
    }
}
