use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use weylcalc::report::{emit_entry_text, Format};
use weylcalc::{emit, parse, run_script, Session};
use weylcalc_core::selftest::{run_all, Budget};

#[derive(Parser)]
#[command(name = "weylcalc", version, about = "Exact noncommutative Hamiltonian calculus")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a script file and print its report.
    Run {
        script: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read statements from stdin and evaluate each as soon as it ends with `;`.
    Repl,
    /// Run the built-in property suite.
    Selftest {
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Scale the number of random cases, in percent.
        #[arg(long, default_value_t = 100)]
        scale: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run { script, format, out } => {
            let src = match std::fs::read_to_string(&script) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("weylcalc: cannot read {}: {e}", script.display());
                    return ExitCode::from(2);
                }
            };
            let report = run_script(&src);
            let fmt = match format {
                OutFormat::Text => Format::Text,
                OutFormat::Json => Format::Json,
            };
            let bytes = emit(&report, fmt);
            let written = match out {
                Some(path) => std::fs::write(&path, &bytes),
                None => io::stdout().write_all(&bytes),
            };
            if let Err(e) = written {
                eprintln!("weylcalc: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if report.success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Cmd::Repl => repl(),
        Cmd::Selftest { seed, scale } => {
            let results = run_all(Budget { seed, scale_percent: scale });
            let mut ok = true;
            for r in &results {
                ok &= r.passed;
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                println!("{verdict} {:>2} {} ({} cases, {} ms){}", r.id, r.name, r.cases, r.millis, if r.detail.is_empty() { String::new() } else { format!(": {}", r.detail) });
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn repl() -> ExitCode {
    let mut session = Session::new();
    let mut buf = String::new();
    let mut ok = true;
    let mut consumed = 0;
    let stdin = io::stdin();
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        buf.push_str(&line);
        buf.push('\n');
        if !line.trim_end().ends_with(';') {
            continue;
        }
        let mut out = String::new();
        let offset = consumed;
        consumed += buf.lines().count();
        match parse(&buf) {
            Ok(script) => {
                for s in &script.stmts {
                    let mut s = s.clone();
                    s.pos.line += offset;
                    let e = session.execute(&s);
                    ok &= !matches!(e.status, weylcalc::report::Status::Error | weylcalc::report::Status::Fail);
                    emit_entry_text(&mut out, &e);
                }
            }
            Err(mut e) => {
                ok = false;
                e.pos.line += offset;
                out.push_str(&format!("{e}\n"));
            }
        }
        print!("{out}");
        let _ = io::stdout().flush();
        buf.clear();
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
