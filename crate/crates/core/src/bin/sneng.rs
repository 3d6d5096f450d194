use std::cell::RefCell;
use std::io::{self, BufReader};
use std::net::TcpListener;
use std::path::PathBuf;
use std::process::ExitCode;
use std::rc::Rc;

use clap::{Parser, Subcommand, ValueEnum};

use sneng::corpus::{corpus_dir, discover, run_case};
use sneng::snepslog::repl::run_repl;
use sneng::snepslog::serve::serve;
use sneng::snepslog::{Session, SessionOptions};
use sneng::RevisionMode;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Auto,
    Interactive,
}

#[derive(Parser)]
#[command(name = "sneng", version, about = "Semantic network reasoning engine")]
struct Cli {
    /// How contradictions are resolved.
    #[arg(long, value_enum, default_value = "auto", global = true)]
    mode: Mode,
    /// Show origin sets with every answer.
    #[arg(long, global = true)]
    expert: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Interactive read-eval-print loop.
    Repl,
    /// Run a script and print its transcript.
    Run { script: PathBuf },
    /// Serve sessions over TCP (see PROTOCOL.md).
    Serve {
        #[arg(long, default_value_t = 7878)]
        port: u16,
    },
    /// Run the demonstration corpus against its golden transcripts.
    Corpus {
        /// Directory of `*.snlog` scripts and `*.golden` transcripts [default: the bundled corpus]
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Rewrite the golden files instead of comparing.
        #[arg(long)]
        bless: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = SessionOptions {
        mode: match cli.mode {
            Mode::Auto => RevisionMode::Auto,
            Mode::Interactive => RevisionMode::Interactive,
        },
        expert: cli.expert,
        ..SessionOptions::default()
    };
    let result = match cli.command {
        Cmd::Repl => {
            let mut session = Session::new(options);
            let input = Rc::new(RefCell::new(BufReader::new(io::stdin())));
            let output = Rc::new(RefCell::new(io::stdout()));
            run_repl(&mut session, input, output).map(|_| true)
        }
        Cmd::Run { script } => std::fs::read_to_string(&script).map(|text| {
            let mut session = Session::new(options);
            let out = session.run_script(&text);
            for line in &out.transcript {
                println!("{line}");
            }
            out.ok
        }),
        Cmd::Serve { port } => TcpListener::bind(("127.0.0.1", port)).and_then(|listener| {
            eprintln!("listening on {}", listener.local_addr()?);
            serve(listener, options).map(|_| true)
        }),
        Cmd::Corpus { dir, bless } => run_corpus(dir.unwrap_or_else(corpus_dir), bless),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("sneng: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run_corpus(dir: PathBuf, bless: bool) -> io::Result<bool> {
    let mut all = true;
    for case in discover(&dir)? {
        let r = run_case(&case, bless)?;
        let status = if bless {
            "blessed"
        } else if r.passed {
            "ok"
        } else {
            "FAILED"
        };
        println!("{:<16} {status} ({:.2?})", r.name, r.elapsed);
        if let Some(diff) = &r.diff {
            print!("{diff}");
        }
        all &= r.passed || bless;
    }
    Ok(all)
}
