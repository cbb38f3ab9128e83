//! Benchmark harness: warm-up-discarding timing, the micro suites on the
//! five-field point, bulk population runs with ledger-based memory figures,
//! and report emission.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};
use std::rc::Rc;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baseline::{ClassSpec, HandleTable};
use crate::corpus;
use crate::error::{Error, Result};
use crate::native::point as native_point;
use crate::runtime::{Environment, Registry};
use crate::value::{LedgerScope, Value};

pub const DEFAULT_ITERATIONS: u64 = 1_000;
pub const DEFAULT_BULK: usize = 100_000;
pub const DEFAULT_SEED: u64 = 0x5EED;
pub const SEED_VAR: &str = "VOO_BENCH_SEED";
pub const CSV_HEADER: &str =
    "suite,framework,iterations,avg_us,population,bytes_total,bytes_per_object";

/// Seed from `VOO_BENCH_SEED`, or the default.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Framework {
    Voo,
    Baseline,
    Native,
}

impl Framework {
    pub const ALL: [Framework; 3] = [Framework::Voo, Framework::Baseline, Framework::Native];

    pub fn as_str(self) -> &'static str {
        match self {
            Framework::Voo => "voo",
            Framework::Baseline => "baseline",
            Framework::Native => "native",
        }
    }

    /// Namespace of the benchmark point under this framework.
    fn namespace(self) -> &'static str {
        match self {
            Framework::Native => native_point::CLASS_NAME,
            _ => "VooPoint",
        }
    }
}

impl FromStr for Framework {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Framework::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::UnknownFramework(s.to_string()))
    }
}

impl fmt::Display for Framework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    CreationExplicit,
    CreationDefault,
    Setter,
    Getter,
    ClassDeclaration,
    Bulk,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::CreationExplicit,
        Suite::CreationDefault,
        Suite::Setter,
        Suite::Getter,
        Suite::ClassDeclaration,
        Suite::Bulk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::CreationExplicit => "creation-explicit",
            Suite::CreationDefault => "creation-default",
            Suite::Setter => "setter",
            Suite::Getter => "getter",
            Suite::ClassDeclaration => "class-declaration",
            Suite::Bulk => "bulk",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub suite: String,
    pub framework: Framework,
    pub iterations: u64,
    /// Mean microseconds per iteration, warm-up excluded.
    pub avg_us: f64,
    pub population: u64,
    pub bytes_total: u64,
    pub bytes_per_object: f64,
}

impl BenchResult {
    fn timing(suite: Suite, framework: Framework, iterations: u64, avg: Duration) -> Self {
        BenchResult {
            suite: suite.to_string(),
            framework,
            iterations,
            avg_us: avg.as_secs_f64() * 1e6,
            population: 0,
            bytes_total: 0,
            bytes_per_object: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub suites: Vec<Suite>,
    pub frameworks: Vec<Framework>,
    pub iterations: u64,
    pub bulk: usize,
    pub seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            suites: Suite::ALL.to_vec(),
            frameworks: Framework::ALL.to_vec(),
            iterations: DEFAULT_ITERATIONS,
            bulk: DEFAULT_BULK,
            seed: seed_from_env(),
        }
    }
}

impl Scenario {
    /// Select suites and frameworks by name; empty selections mean all.
    pub fn select<S: AsRef<str>>(mut self, suites: &[S], frameworks: &[S]) -> Result<Self> {
        if !suites.is_empty() {
            self.suites = suites
                .iter()
                .map(|s| s.as_ref().parse())
                .collect::<Result<_>>()?;
        }
        if !frameworks.is_empty() {
            self.frameworks = frameworks
                .iter()
                .map(|s| s.as_ref().parse())
                .collect::<Result<_>>()?;
        }
        Ok(self)
    }
}

/// Run `body` once unmeasured, then `times` measured runs; the mean of the
/// measured runs.
pub fn profile(mut body: impl FnMut() -> Result<()>, times: u64) -> Result<Duration> {
    if times == 0 {
        return Err(Error::host("profile needs at least one iteration"));
    }
    body()?;
    let start = Instant::now();
    for _ in 0..times {
        body()?;
    }
    Ok(start.elapsed() / times as u32)
}

/// Positional arguments used by the explicit-creation suite.
pub fn explicit_args() -> Vec<Value> {
    vec![
        Value::double(1.0),
        Value::double(2.0),
        Value::text("test"),
        Value::int(1),
        Value::boolean(true),
    ]
}

/// A registry with the script and native benchmark points loaded.
pub fn bench_registry() -> Result<Registry> {
    let mut reg = Registry::new();
    corpus::load_voo_point(&mut reg)?;
    native_point::register(&mut reg)?;
    Ok(reg)
}

fn baseline_point(reg: &Registry) -> Result<Rc<ClassSpec>> {
    let c = reg
        .class("VooPoint")
        .ok_or_else(|| Error::UnknownClass("VooPoint".into()))?;
    Ok(Rc::new(ClassSpec::from_class(c)))
}

fn micro(suite: Suite, fw: Framework, iterations: u64) -> Result<Option<BenchResult>> {
    let reg = bench_registry()?;
    let mut env = Environment::new();
    let ns = fw.namespace();
    let args = explicit_args();
    let avg = match (fw, suite) {
        (Framework::Native, Suite::ClassDeclaration) => return Ok(None),
        (_, Suite::Bulk) => return Ok(None),
        (Framework::Baseline, _) => {
            let spec = baseline_point(&reg)?;
            let mut table = HandleTable::new();
            let probe = table.handle_create(&spec, &args)?;
            let h = probe.to_text()?.to_string();
            let avg = match suite {
                Suite::CreationExplicit => {
                    let mut made = Vec::new();
                    let avg = profile(
                        || {
                            made.push(table.handle_create(&spec, &args)?);
                            Ok(())
                        },
                        iterations,
                    )?;
                    for m in made {
                        table.handle_destroy(m.to_text()?)?;
                    }
                    avg
                }
                Suite::CreationDefault => {
                    let mut made = Vec::new();
                    let avg = profile(
                        || {
                            made.push(table.handle_create_default(&spec));
                            Ok(())
                        },
                        iterations,
                    )?;
                    for m in made {
                        table.handle_destroy(m.to_text()?)?;
                    }
                    avg
                }
                Suite::Setter => {
                    let v = Value::double(2.5);
                    profile(|| table.handle_set(&h, "x", v.clone()), iterations)?
                }
                Suite::Getter => profile(|| table.handle_get(&h, "x").map(drop), iterations)?,
                Suite::ClassDeclaration => {
                    let fields: Vec<(&str, Value)> = spec
                        .fields
                        .iter()
                        .map(String::as_str)
                        .zip(spec.defaults.iter().cloned())
                        .collect();
                    let mut classes: HashMap<String, Rc<ClassSpec>> = HashMap::new();
                    profile(
                        || {
                            let c = Rc::new(ClassSpec::new("DeclPoint", &fields));
                            classes.insert(c.name.clone(), c);
                            Ok(())
                        },
                        iterations,
                    )?
                }
                Suite::Bulk => unreachable!(),
            };
            table.handle_destroy(&h)?;
            avg
        }
        _ => {
            let new = format!("{ns}::new");
            let new_default = format!("{ns}::new()");
            let set_x = format!("{ns}::set.x");
            let get_x = format!("{ns}::get.x");
            match suite {
                Suite::CreationExplicit => {
                    profile(|| reg.invoke(&new, &mut env, &args).map(drop), iterations)?
                }
                Suite::CreationDefault => {
                    profile(|| reg.invoke(&new_default, &mut env, &[]).map(drop), iterations)?
                }
                Suite::Setter => {
                    let p = reg.invoke(&new, &mut env, &args)?;
                    env.set("p", p);
                    let set_args = [Value::text("p"), Value::double(2.5)];
                    profile(|| reg.invoke(&set_x, &mut env, &set_args).map(drop), iterations)?
                }
                Suite::Getter => {
                    let p = [reg.invoke(&new, &mut env, &args)?];
                    profile(|| reg.invoke(&get_x, &mut env, &p).map(drop), iterations)?
                }
                Suite::ClassDeclaration => {
                    let src = corpus::VOO_POINT.replacen("VooPoint", "DeclPoint", 1);
                    let mut fresh = Registry::new();
                    profile(|| fresh.declare(&src).map(drop), iterations)?
                }
                Suite::Bulk => unreachable!(),
            }
        }
    };
    Ok(Some(BenchResult::timing(suite, fw, iterations, avg)))
}

/// Per-object field values for bulk runs.
struct BulkGen(ChaCha8Rng);

impl BulkGen {
    fn new(seed: u64) -> Self {
        BulkGen(ChaCha8Rng::seed_from_u64(seed))
    }

    fn next(&mut self, i: usize) -> Vec<Value> {
        let r = &mut self.0;
        vec![
            Value::double(r.gen_range(-1000.0..1000.0)),
            Value::double(r.gen_range(-1000.0..1000.0)),
            Value::text(format!("p{i}")),
            Value::int(i as i64),
            Value::boolean(r.gen_bool(0.5)),
        ]
    }
}

/// Create `n` points under `fw` in a fresh runtime, timing the creation and
/// charging the ledger bytes still held by the population afterwards.
pub fn bulk_bench(fw: Framework, n: usize, seed: u64) -> Result<BenchResult> {
    let reg = bench_registry()?;
    let mut env = Environment::new();
    let mut gen = BulkGen::new(seed);
    let spec = baseline_point(&reg)?;
    let new = format!("{}::new", fw.namespace());

    let scope = LedgerScope::begin();
    let mut table = HandleTable::new();
    let mut population: Vec<Value> = Vec::with_capacity(n);
    let start = Instant::now();
    for i in 0..n {
        let args = gen.next(i);
        let obj = match fw {
            Framework::Baseline => table.handle_create(&spec, &args)?,
            _ => reg.invoke(&new, &mut env, &args)?,
        };
        population.push(obj);
    }
    let elapsed = start.elapsed();
    let bytes_total = scope.delta().live_bytes.max(0) as u64;
    drop(population);
    drop(table);

    Ok(BenchResult {
        suite: Suite::Bulk.to_string(),
        framework: fw,
        iterations: n as u64,
        avg_us: if n == 0 {
            0.0
        } else {
            elapsed.as_secs_f64() * 1e6 / n as f64
        },
        population: n as u64,
        bytes_total,
        bytes_per_object: if n == 0 {
            0.0
        } else {
            bytes_total as f64 / n as f64
        },
    })
}

/// Wall time to create `n` points under `fw`, excluding value generation.
pub fn creation_time(fw: Framework, n: usize, seed: u64) -> Result<Duration> {
    let reg = bench_registry()?;
    let mut env = Environment::new();
    let mut gen = BulkGen::new(seed);
    let spec = baseline_point(&reg)?;
    let new = format!("{}::new", fw.namespace());
    let inputs: Vec<Vec<Value>> = (0..n).map(|i| gen.next(i)).collect();
    let mut table = HandleTable::new();
    let mut population: Vec<Value> = Vec::with_capacity(n);
    let start = Instant::now();
    for args in &inputs {
        let obj = match fw {
            Framework::Baseline => table.handle_create(&spec, args)?,
            _ => reg.invoke(&new, &mut env, args)?,
        };
        population.push(obj);
    }
    Ok(start.elapsed())
}

/// Run every selected suite for every selected framework.
pub fn run_suite(sc: &Scenario) -> Result<Vec<BenchResult>> {
    let mut out = Vec::new();
    for &suite in &sc.suites {
        for &fw in &sc.frameworks {
            if suite == Suite::Bulk {
                out.push(bulk_bench(fw, sc.bulk, sc.seed)?);
            } else if let Some(r) = micro(suite, fw, sc.iterations)? {
                out.push(r);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format \"{other}\"")),
        }
    }
}

pub fn emit_report(results: &[BenchResult], format: ReportFormat, sink: &mut dyn Write) -> io::Result<()> {
    match format {
        ReportFormat::Text => {
            writeln!(
                sink,
                "{:<18} {:<9} {:>10} {:>12} {:>10} {:>14} {:>12}",
                "suite", "framework", "iterations", "avg_us", "population", "bytes_total", "bytes/obj"
            )?;
            for r in results {
                writeln!(
                    sink,
                    "{:<18} {:<9} {:>10} {:>12.4} {:>10} {:>14} {:>12.1}",
                    r.suite,
                    r.framework,
                    r.iterations,
                    r.avg_us,
                    r.population,
                    r.bytes_total,
                    r.bytes_per_object
                )?;
            }
        }
        ReportFormat::Csv => {
            writeln!(sink, "{CSV_HEADER}")?;
            for r in results {
                writeln!(
                    sink,
                    "{},{},{},{},{},{},{}",
                    r.suite,
                    r.framework,
                    r.iterations,
                    r.avg_us,
                    r.population,
                    r.bytes_total,
                    r.bytes_per_object
                )?;
            }
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *sink, results)?;
            writeln!(sink)?;
        }
    }
    Ok(())
}
