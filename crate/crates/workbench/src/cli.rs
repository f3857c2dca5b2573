//! Command-line surface of the `quasar` binary.

use std::io::Write;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand};
use quasar_core::assessment::{AssessmentSnapshot, InputSource, TECHNICAL_ROWS};
use quasar_core::inventory::{
    parse_certificates, parse_target, probe_many, CertificateRecord, ProbeOptions, DEFAULT_CONCURRENCY,
};
use quasar_core::optimizer::ProblemDocument;
use quasar_core::trajectory::{Action, LtMode};
use serde_json::json;

use crate::api::{self, AppState};
use crate::clock::Clock;
use crate::document::{read_json, to_json};
use crate::error::{Error, Result};
use crate::ops;
use crate::projection::ProjectionRequest;
use crate::report::{render_report, score_snapshot, ScoreReport};
use crate::store::SnapshotStore;

#[derive(Debug, Parser)]
#[command(name = "quasar", version, about = "Post-quantum readiness workbench")]
struct Cli {
    /// Snapshot store directory.
    #[arg(long, global = true, env = "QUASAR_STORE", default_value = "quasar-store")]
    store: PathBuf,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a snapshot file.
    Assess { snapshot: PathBuf },
    /// Gap of the target state against current area scores.
    Gap { snapshot: PathBuf },
    /// Aggregated risk per category.
    Risk { snapshot: PathBuf },
    /// Project the trajectory series as CSV.
    Project(ProjectArgs),
    /// Solve an allocation problem file.
    Optimize {
        problem: PathBuf,
        /// Re-solve along a time grid, `start:end:step`.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Cryptographic inventory tools.
    #[command(subcommand)]
    Inventory(InventoryCommand),
    /// Snapshot store.
    #[command(subcommand)]
    Snapshot(SnapshotCommand),
    /// Markdown report for a stored snapshot.
    Report {
        id: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the local HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Address to bind; loopback unless widened explicitly.
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        bind: IpAddr,
        /// Directory of static files served outside `/api`.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ProjectArgs {
    /// Preparedness at t = 0.
    #[arg(long)]
    alpha: f64,
    /// Preparedness the curve approaches.
    #[arg(long)]
    beta: f64,
    /// Transformation rate per time unit.
    #[arg(long)]
    lambda: f64,
    /// Initial implementation progress [default: alpha].
    #[arg(long)]
    i0: Option<f64>,
    /// Final implementation progress [default: beta].
    #[arg(long = "if")]
    i_f: Option<f64>,
    /// Implementation rate [default: lambda].
    #[arg(long)]
    k: Option<f64>,
    /// End of the time grid.
    #[arg(long)]
    horizon: f64,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    /// Long-term curve: `literal` or `prose`.
    #[arg(long, default_value = "literal")]
    lt_mode: String,
    /// JSON list of actions (`name`, `impact`, `horizon`).
    #[arg(long)]
    actions: Option<PathBuf>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum InventoryCommand {
    /// Classify an inventory file (JSON or CSV).
    Classify {
        file: PathBuf,
        #[arg(long)]
        as_of: Option<DateTime<Utc>>,
    },
    /// Read certificates from a PEM/DER file or a directory of them.
    ScanCerts { path: PathBuf },
    /// Record what TLS endpoints negotiate.
    Probe {
        /// `host:port` pairs.
        #[arg(required = true)]
        targets: Vec<String>,
        /// Required: probing opens network connections.
        #[arg(long)]
        allow_network: bool,
        /// Seconds per handshake.
        #[arg(long, default_value_t = 5.0)]
        timeout: f64,
        #[arg(long, default_value_t = DEFAULT_CONCURRENCY)]
        concurrency: usize,
        #[arg(long, default_value_t = 0.5)]
        sensitivity: f64,
        #[arg(long, default_value_t = 10.0)]
        retention: f64,
    },
    /// Derive the technical readiness matrix from an inventory.
    Matrix {
        file: PathBuf,
        #[arg(long)]
        as_of: Option<DateTime<Utc>>,
    },
}

#[derive(Debug, Subcommand)]
enum SnapshotCommand {
    Add { file: PathBuf },
    List,
    Show { id: String },
}

struct Context<'a> {
    clock: Arc<dyn Clock>,
    json: bool,
    store: PathBuf,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Context<'_> {
    fn print(&mut self, text: &str) -> Result<()> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| Error::internal(format!("writing output: {e}")))
    }

    fn json<T: serde::Serialize>(&mut self, value: &T) -> Result<()> {
        let text = to_json(value);
        self.print(&text)
    }

    fn warn(&mut self, message: impl std::fmt::Display) {
        let _ = writeln!(self.err, "warning: {message}");
    }

    fn open_store(&self) -> Result<SnapshotStore> {
        SnapshotStore::open(&self.store)
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, clock: Arc<dyn Clock>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let mut ctx = Context {
        clock,
        json: cli.json,
        store: cli.store,
        out,
        err,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, ctx: &mut Context<'_>) -> Result<()> {
    match command {
        Command::Assess { snapshot } => assess(&snapshot, ctx),
        Command::Gap { snapshot } => gap(&snapshot, ctx),
        Command::Risk { snapshot } => risk(&snapshot, ctx),
        Command::Project(args) => project(args, ctx),
        Command::Optimize { problem, sweep } => optimize(&problem, sweep.as_deref(), ctx),
        Command::Inventory(cmd) => inventory(cmd, ctx),
        Command::Snapshot(cmd) => snapshot(cmd, ctx),
        Command::Report { id, output } => report(&id, output.as_deref(), ctx),
        Command::Serve { port, bind, ui_dir } => serve(SocketAddr::new(bind, port), ui_dir, ctx),
    }
}

/// Up to six decimals, trailing zeros dropped.
fn short(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn source_text(s: InputSource) -> &'static str {
    match s {
        InputSource::Explicit => "explicit inputs",
        InputSource::AreaComposites => "area composites",
    }
}

fn scored(path: &Path, ctx: &Context<'_>) -> Result<ScoreReport> {
    let snapshot: AssessmentSnapshot = read_json(path)?;
    score_snapshot(&snapshot, ctx.clock.now())
}

fn assess(path: &Path, ctx: &mut Context<'_>) -> Result<()> {
    let r = scored(path, ctx)?;
    if ctx.json {
        return ctx.json(&r);
    }
    let mut text = String::new();
    if !r.label.is_empty() {
        text += &format!("Snapshot: {}\n", r.label);
    }
    text += &format!(
        "PQR {} (normalized {})\n",
        short(r.pqr.literal),
        short(r.pqr.normalized)
    );
    text += &format!(
        "PI {} literal, {} rescaled ({})\n",
        short(r.pi.literal),
        short(r.pi.rescaled),
        source_text(r.pi.source)
    );
    text += &format!("RS {} ({})\n", short(r.rs), source_text(r.rs_source));
    match r.risk_vector {
        Some(v) => text += &format!("Risk vector: {}, {}, {}\n", short(v[0]), short(v[1]), short(v[2])),
        None => text += "Risk vector: not available (no risk matrix)\n",
    }
    if let Some(g) = &r.gaps {
        if let Some(&top) = g.ranking.first() {
            let row = &g.areas[top];
            text += &format!("Largest gap: {} ({})\n", row.area, short(row.gap));
        }
    }
    ctx.print(&text)?;
    for w in r.warnings.clone() {
        ctx.warn(w);
    }
    Ok(())
}

fn gap(path: &Path, ctx: &mut Context<'_>) -> Result<()> {
    let r = scored(path, ctx)?;
    let gaps = r
        .gaps
        .ok_or_else(|| Error::input("targetState", "no target state recorded"))?;
    if ctx.json {
        return ctx.json(&gaps);
    }
    let mut text = String::from("rank\tarea\tcurrent\ttarget\tgap\n");
    for (rank, &i) in gaps.ranking.iter().enumerate() {
        let row = &gaps.areas[i];
        text += &format!(
            "{}\t{}\t{}\t{}\t{}\n",
            rank + 1,
            row.area,
            short(row.current),
            short(row.target),
            short(row.gap)
        );
    }
    ctx.print(&text)
}

fn risk(path: &Path, ctx: &mut Context<'_>) -> Result<()> {
    let r = scored(path, ctx)?;
    let v = r
        .risk_vector
        .ok_or_else(|| Error::input("riskMatrix", "no risk matrix recorded"))?;
    if ctx.json {
        return ctx.json(&v);
    }
    let text: String = v
        .iter()
        .enumerate()
        .map(|(k, x)| format!("category {}\t{}\n", k + 1, short(*x)))
        .collect();
    ctx.print(&text)
}

fn project(args: ProjectArgs, ctx: &mut Context<'_>) -> Result<()> {
    let lt_mode: LtMode = args.lt_mode.parse().map_err(|e| Error::input("--lt-mode", e))?;
    let actions: Vec<Action> = match &args.actions {
        Some(path) => read_json(path)?,
        None => Vec::new(),
    };
    let request = ProjectionRequest {
        alpha: args.alpha,
        beta: args.beta,
        lambda: args.lambda,
        i0: args.i0,
        i_f: args.i_f,
        k: args.k,
        actions,
        lt_mode,
        horizon_end: args.horizon,
        step: args.step,
    };
    let bundle = request.run()?;
    let text = if ctx.json {
        to_json(&bundle)
    } else {
        bundle.to_csv()
    };
    match args.output {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Error::input("--output", format!("{}: {e}", path.display()))),
        None => ctx.print(&text),
    }
}

fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::input("--sweep", format!("expected start:end:step, got '{spec}'"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let [start, end, step] = parts[..] else {
        return Err(bad());
    };
    if !(start.is_finite() && end.is_finite() && step.is_finite() && step > 0.0 && end >= start) {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn optimize(path: &Path, sweep: Option<&str>, ctx: &mut Context<'_>) -> Result<()> {
    let doc: ProblemDocument = read_json(path)?;
    let Some(sweep) = sweep else {
        let solution = ops::optimize(&doc)?;
        if ctx.json {
            return ctx.json(&solution);
        }
        let mut text = format!(
            "feasible: {}\nobjective: {}\n",
            if solution.feasible { "yes" } else { "no" },
            short(solution.objective_value)
        );
        for a in &solution.assignment {
            text += &format!("{} = {}\n", a.name, short(a.value));
        }
        text += &format!(
            "max inequality violation: {:e}\nmax equality violation: {:e}\n",
            solution.max_inequality_violation, solution.max_equality_violation
        );
        return ctx.print(&text);
    };

    let mut rows = Vec::new();
    for t in parse_sweep(sweep)? {
        let mut at = doc.clone();
        at.t = t;
        rows.push((t, ops::optimize(&at)?));
    }
    if ctx.json {
        let value: Vec<_> = rows
            .iter()
            .map(|(t, s)| json!({ "t": t, "solution": s }))
            .collect();
        return ctx.json(&value);
    }
    let names: Vec<&str> = doc.variables.iter().map(|v| v.name.as_str()).collect();
    let mut text = format!("t,objective,feasible,{}\n", names.join(","));
    for (t, s) in &rows {
        let values: Vec<String> = s.values().iter().map(|v| short(*v)).collect();
        text += &format!(
            "{},{},{},{}\n",
            short(*t),
            short(s.objective_value),
            s.feasible,
            values.join(",")
        );
    }
    ctx.print(&text)
}

fn inventory(cmd: InventoryCommand, ctx: &mut Context<'_>) -> Result<()> {
    match cmd {
        InventoryCommand::Classify { file, as_of } => {
            let assets = ops::load_inventory(&file)?;
            let c = ops::classify_inventory(&assets, as_of.unwrap_or_else(|| ctx.clock.now()))?;
            if ctx.json {
                return ctx.json(&c);
            }
            let mut text = String::from("id\tclass\tnist level\thndl priority\trule\n");
            for a in &c.classified {
                text += &format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    a.asset.id,
                    serde_json::to_value(a.vulnerability)
                        .ok()
                        .and_then(|v| v.as_str().map(String::from))
                        .unwrap_or_default(),
                    a.nist_level_equivalent.map_or("-".into(), |l| l.to_string()),
                    short(a.hndl_priority),
                    a.rationale
                );
            }
            text += &format!("\nexposure ranking: {}\n", c.ranking.join(", "));
            ctx.print(&text)?;
            for w in c.matrix.warnings.clone() {
                ctx.warn(w);
            }
            Ok(())
        }
        InventoryCommand::Matrix { file, as_of } => {
            let assets = ops::load_inventory(&file)?;
            let c = ops::classify_inventory(&assets, as_of.unwrap_or_else(|| ctx.clock.now()))?;
            if ctx.json {
                return ctx.json(&c.matrix);
            }
            let mut text = String::new();
            for (r, row) in c.matrix.shares.iter().enumerate() {
                let cells: Vec<String> = row
                    .iter()
                    .enumerate()
                    .map(|(col, s)| {
                        format!(
                            "{} ({}/{})",
                            short(c.matrix.matrix.cell(r, col).value()),
                            s.numerator,
                            s.denominator
                        )
                    })
                    .collect();
                text += &format!("{}\t{}\n", TECHNICAL_ROWS[r], cells.join("\t"));
            }
            ctx.print(&text)?;
            for w in c.matrix.warnings.clone() {
                ctx.warn(w);
            }
            Ok(())
        }
        InventoryCommand::ScanCerts { path } => scan_certs(&path, ctx),
        InventoryCommand::Probe {
            targets,
            allow_network,
            timeout,
            concurrency,
            sensitivity,
            retention,
        } => {
            if !allow_network {
                return Err(Error::input(
                    "--allow-network",
                    "probing opens network connections; pass --allow-network to proceed",
                ));
            }
            if !(timeout.is_finite() && timeout > 0.0) {
                return Err(Error::input("--timeout", "must be a positive number of seconds"));
            }
            let parsed = targets
                .iter()
                .map(|t| {
                    parse_target(t).ok_or_else(|| Error::input("target", format!("'{t}' is not host:port")))
                })
                .collect::<Result<Vec<_>>>()?;
            let options = ProbeOptions {
                timeout: Duration::from_secs_f64(timeout),
                sensitivity,
                retention_years: retention,
            };
            let results = probe_many(&parsed, &options, concurrency);
            let mut ok = Vec::new();
            let mut failed = 0;
            for ((host, port), outcome) in results {
                match outcome {
                    Ok(r) => ok.push(r),
                    Err(e) => {
                        failed += 1;
                        let _ = writeln!(ctx.err, "error: {host}:{port}: {e}");
                    }
                }
            }
            if ctx.json {
                ctx.json(&ok)?;
            } else {
                let mut text = String::new();
                for r in &ok {
                    text += &format!(
                        "{}:{}\t{}\t{}\t{}\n",
                        r.host,
                        r.port,
                        r.protocol_version,
                        r.key_exchange_group.as_deref().unwrap_or("-"),
                        r.leaf_signature_algorithm.as_deref().unwrap_or("-")
                    );
                }
                ctx.print(&text)?;
            }
            if failed > 0 {
                Err(Error::input(
                    "target",
                    format!("{failed} of {} probes failed", parsed.len()),
                ))
            } else {
                Ok(())
            }
        }
    }
}

fn certificate_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    if !path.is_dir() {
        return Err(Error::input("", format!("{}: file not found", path.display())));
    }
    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(path).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::input("", e))?;
        let is_cert = entry
            .path()
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "pem" | "crt" | "cer" | "der"));
        if entry.file_type().is_file() && is_cert {
            files.push(entry.into_path());
        }
    }
    Ok(files)
}

fn scan_certs(path: &Path, ctx: &mut Context<'_>) -> Result<()> {
    let files = certificate_files(path)?;
    let mut records: Vec<(String, CertificateRecord)> = Vec::new();
    let mut diagnostics = Vec::new();
    let mut first_error = None;
    for file in &files {
        let bytes = std::fs::read(file).map_err(|e| Error::input("", format!("{}: {e}", file.display())))?;
        let name = file.display().to_string();
        match parse_certificates(&bytes) {
            Ok(scan) => {
                for d in scan.diagnostics {
                    diagnostics.push(json!({ "file": name, "offset": d.offset, "message": d.message }));
                }
                for w in scan.warnings {
                    ctx.warn(format!("{name}: {w}"));
                }
                records.extend(scan.records.into_iter().map(|r| (name.clone(), r)));
            }
            Err(e) => {
                diagnostics.push(json!({ "file": name, "message": e.to_string() }));
                first_error.get_or_insert(format!("{name}: {e}"));
            }
        }
    }
    if records.is_empty() {
        if let Some(e) = first_error {
            return Err(Error::input("", e));
        }
    }
    if ctx.json {
        let records: Vec<_> = records
            .iter()
            .map(|(file, r)| json!({ "file": file, "record": r }))
            .collect();
        return ctx.json(&json!({ "records": records, "diagnostics": diagnostics }));
    }
    let mut text = String::new();
    for (file, r) in &records {
        text += &format!(
            "{file}\t{}\t{} {}\t{}\tnotAfter {}\n",
            r.subject,
            r.public_key_algorithm,
            r.public_key_bits,
            r.signature_algorithm,
            r.not_after.to_rfc3339()
        );
    }
    ctx.print(&text)?;
    for d in diagnostics {
        ctx.warn(format!("unreadable certificate: {d}"));
    }
    Ok(())
}

fn snapshot(cmd: SnapshotCommand, ctx: &mut Context<'_>) -> Result<()> {
    let store = ctx.open_store()?;
    match cmd {
        SnapshotCommand::Add { file } => {
            let snapshot: AssessmentSnapshot = read_json(&file)?;
            let stored = store.add(snapshot, ctx.clock.as_ref())?;
            let id = stored.id.unwrap_or_default();
            if ctx.json {
                ctx.json(&json!({ "id": id }))
            } else {
                ctx.print(&format!("{id}\n"))
            }
        }
        SnapshotCommand::List => {
            let entries = store.list()?;
            if ctx.json {
                return ctx.json(&entries);
            }
            let text: String = entries
                .iter()
                .map(|e| format!("{}\t{}\t{}\n", e.id, e.timestamp.to_rfc3339(), e.label))
                .collect();
            ctx.print(&text)
        }
        SnapshotCommand::Show { id } => {
            let snapshot = store.get(&id)?;
            ctx.json(&snapshot)
        }
    }
}

fn report(id: &str, output: Option<&Path>, ctx: &mut Context<'_>) -> Result<()> {
    let snapshot = ctx.open_store()?.get(id)?;
    let scores = score_snapshot(&snapshot, ctx.clock.now())?;
    let markdown = render_report(&snapshot, &scores);
    match output {
        Some(path) => std::fs::write(path, markdown)
            .map_err(|e| Error::input("--output", format!("{}: {e}", path.display()))),
        None => ctx.print(&markdown),
    }
}

fn serve(addr: SocketAddr, ui_dir: Option<PathBuf>, ctx: &mut Context<'_>) -> Result<()> {
    let store = ctx.open_store()?;
    if let Some(dir) = &ui_dir {
        if !dir.is_dir() {
            return Err(Error::input(
                "--ui-dir",
                format!("{}: not a directory", dir.display()),
            ));
        }
    }
    let state = Arc::new(AppState {
        store,
        clock: ctx.clock.clone(),
    });
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(Error::internal)?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| Error::internal(format!("cannot listen on {addr}: {e}")))?;
        let local = listener.local_addr().map_err(Error::internal)?;
        ctx.print(&format!("listening on http://{local}\n"))?;
        let _ = ctx.out.flush();
        api::serve(listener, api::router(state, ui_dir))
            .await
            .map_err(Error::internal)
    })
}
