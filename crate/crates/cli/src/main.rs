use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use voo_core::harness::{self, ReportFormat, Scenario};
use voo_core::{corpus, expand, parse_classes, Environment, Registry, Value};

#[derive(Parser)]
#[command(name = "voo", version, about = "Value-semantics classes: parse, expand, benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the parsed class declarations of a file as JSON.
    Parse { file: PathBuf },
    /// Print the namespace/proc desugaring of every class in a file.
    Expand { file: PathBuf },
    /// Run benchmark suites and write a report.
    Bench {
        /// Comma-separated suite names (default: all).
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        /// Comma-separated frameworks: voo, baseline, native (default: all).
        #[arg(long, value_delimiter = ',')]
        frameworks: Vec<String>,
        #[arg(long, default_value_t = harness::DEFAULT_ITERATIONS)]
        iterations: u64,
        /// Population size for the bulk suite.
        #[arg(long, default_value_t = harness::DEFAULT_BULK)]
        bulk: usize,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Walk through the Person and Shape examples.
    Demo,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse(path: &Path) -> Result<()> {
    let decls = parse_classes(&read(path)?)?;
    println!("{}", serde_json::to_string_pretty(&decls)?);
    Ok(())
}

fn expand_file(path: &Path) -> Result<()> {
    let mut reg = Registry::new();
    let mut out = io::stdout().lock();
    for d in parse_classes(&read(path)?)? {
        out.write_all(expand(&d, &reg)?.as_bytes())?;
        reg.compile_class(&d)?;
    }
    Ok(())
}

fn bench(sc: Scenario, format: ReportFormat, out: Option<PathBuf>) -> Result<()> {
    let results = harness::run_suite(&sc)?;
    match out {
        Some(path) => {
            let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            harness::emit_report(&results, format, &mut w)?;
            w.flush()?;
        }
        None => harness::emit_report(&results, format, &mut io::stdout().lock())?,
    }
    Ok(())
}

fn demo() -> Result<()> {
    let mut reg = Registry::new();
    corpus::load_all(&mut reg)?;
    let mut env = Environment::new();
    let run = |env: &mut Environment, cmd: &str, args: &[Value]| -> Result<Value> {
        let v = reg.invoke(cmd, env, args)?;
        let shown: Vec<String> = args.iter().map(Value::display_text).collect();
        println!("{cmd} {} => {}", shown.join(" "), v.display_text());
        Ok(v)
    };

    let p = run(&mut env, "Person::new", &["Alice".into(), 30.into(), 72000.0.into()])?;
    run(&mut env, "Person::greet", &[p.clone()])?;
    let older = {
        env.set("q", p.clone());
        run(&mut env, "Person::set.age", &["q".into(), 31.into()])?;
        env.get("q")?
    };
    println!("original {} / copy {}", p.display_text(), older.display_text());

    let e = run(&mut env, "Employee::new.args", &["-name".into(), "Bob".into(), "-bonus".into(), 500.0.into()])?;
    env.set("e", e);
    run(&mut env, "Employee::promote", &["e".into(), "lead".into()])?;
    run(&mut env, "Employee::raise", &["e".into(), 10.0.into()])?;
    let e = env.get("e")?;
    run(&mut env, "Employee::greet", &[e.clone()])?;
    run(&mut env, "Employee::total", &[e])?;
    run(&mut env, "Employee::hire", &[])?;

    for (class, args) in [
        ("Shape", vec![Value::double(2.0)]),
        ("Circle", vec![Value::double(5.0)]),
        ("ColoredCircle", vec![Value::double(5.0), Value::text("blue")]),
    ] {
        let s = run(&mut env, &format!("{class}::new"), &args)?;
        run(&mut env, "Shape::area", &[s])?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Parse { file } => parse(&file),
        Command::Expand { file } => expand_file(&file),
        Command::Bench {
            suites,
            frameworks,
            iterations,
            bulk,
            format,
            out,
        } => Scenario {
            iterations,
            bulk,
            ..Scenario::default()
        }
        .select(&suites, &frameworks)
        .map_err(Into::into)
        .and_then(|sc| bench(sc, format, out)),
        Command::Demo => demo(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("voo: {e:#}");
            ExitCode::FAILURE
        }
    }
}
