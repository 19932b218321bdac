// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::mutation::{Candidate, Endpoint, ExternalGenerator, GeneratorHandle};
use crate::sandbox::{Limits, Sandbox};
use crate::search::{breakthroughs_csv, run_search_with, SearchOptions, SearchTree, TreeExport};
use crate::tasks::{builtin_task, TaskOptions};

use super::manifest::{
    ArtifactPaths, BestNode, LimitsRecord, RunManifest, RunStatus, MANIFEST_SCHEMA_VERSION,
};
use super::{io_err, ReportError};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const STATE_FILE: &str = "tree_state.json";
pub const TREE_FILE: &str = "tree.json";
pub const BREAKTHROUGHS_FILE: &str = "breakthroughs.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
const NODES_DIR: &str = "nodes";
const STATE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Mutator,
    ExternalProcess {
        program: String,
        args: Vec<String>,
        timeout: Duration,
    },
    ExternalHttp {
        url: String,
        timeout: Duration,
    },
}

#[derive(Debug, Clone)]
pub struct RunArgs {
    pub output_root: PathBuf,
    pub task_id: String,
    pub task_options: TaskOptions,
    pub generator: GeneratorSpec,
    pub budget: usize,
    pub c_puct: f64,
    pub seed: u64,
    pub limits: Limits,
    pub run_id: Option<String>,
    /// Program text to start from instead of the task's own root.
    pub root_program: Option<String>,
    pub ideas: Vec<String>,
    /// Also write wall times into `tree.json`, at the cost of reproducible bytes.
    pub embed_timings: bool,
}

impl RunArgs {
    pub fn new(output_root: impl Into<PathBuf>, task_id: &str) -> Self {
        Self {
            output_root: output_root.into(),
            task_id: task_id.to_string(),
            task_options: TaskOptions::default(),
            generator: GeneratorSpec::Mutator,
            budget: 100,
            c_puct: crate::search::DEFAULT_C_PUCT,
            seed: 0,
            limits: Limits::default(),
            run_id: None,
            root_program: None,
            ideas: Vec::new(),
            embed_timings: false,
        }
    }
}

/// Everything needed to regenerate the exports of a finished run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunState {
    pub schema_version: u32,
    pub run_id: String,
    pub task_id: String,
    pub tree: SearchTree,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub run_id: String,
    pub run_dir: PathBuf,
    pub node_count: usize,
    pub root_score: f64,
    pub best: BestNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    Tree,
    Breakthroughs,
}

/// Run id used when none is given: the same arguments always name the same run.
pub fn default_run_id(task_id: &str, seed: u64, budget: usize, c_puct: f64) -> String {
    format!("{task_id}-s{seed}-b{budget}-c{c_puct}")
}

pub fn run_dir(output_root: &Path, run_id: &str) -> PathBuf {
    output_root.join("runs").join(run_id)
}

fn check_run_id(run_id: &str) -> Result<(), ReportError> {
    let ok = !run_id.is_empty()
        && !run_id.starts_with('.')
        && run_id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'));
    if ok {
        Ok(())
    } else {
        Err(ReportError::Invalid(format!(
            "run id `{run_id}` may only use letters, digits, '.', '_' and '-', and may not start with '.'"
        )))
    }
}

fn build_generator(spec: &GeneratorSpec, task: &dyn crate::tasks::ScorableTask) -> GeneratorHandle {
    match spec {
        GeneratorSpec::Mutator => GeneratorHandle::Mutator(task.mutation_schedule()),
        GeneratorSpec::ExternalProcess {
            program,
            args,
            timeout,
        } => GeneratorHandle::External(ExternalGenerator::new(
            Endpoint::Process {
                program: program.clone(),
                args: args.clone(),
            },
            *timeout,
        )),
        GeneratorSpec::ExternalHttp { url, timeout } => GeneratorHandle::External(
            ExternalGenerator::new(Endpoint::Http { url: url.clone() }, *timeout),
        ),
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), ReportError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ReportError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| ReportError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    write_file(path, text)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ReportError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| ReportError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn timings_csv(tree: &SearchTree) -> String {
    let mut out = String::from("node_id,wall_time_ms\n");
    for u in tree.nodes() {
        out.push_str(&format!("{},{}\n", u.id, u.eval_record.wall_time_ms));
    }
    out
}

fn read_timings(path: &Path) -> Result<Vec<u64>, ReportError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| ReportError::Invalid(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for row in reader.deserialize::<(usize, u64)>() {
        let (id, ms) = row.map_err(|e| ReportError::Invalid(format!("{}: {e}", path.display())))?;
        if id != out.len() {
            return Err(ReportError::Invalid(format!(
                "{}: rows out of order at node {id}",
                path.display()
            )));
        }
        out.push(ms);
    }
    Ok(out)
}

fn render(state: &RunState, kind: ExportKind, timings: Option<&[u64]>) -> String {
    match kind {
        ExportKind::Tree => {
            TreeExport::new(&state.tree, &state.run_id, &state.task_id, timings).to_json()
        }
        ExportKind::Breakthroughs => breakthroughs_csv(&state.tree.breakthrough_series()),
    }
}

/// Run a search and write its run directory. Candidate failures are part of
/// the result; only infrastructure problems return an error.
pub fn cmd_run(args: &RunArgs) -> Result<RunSummary, ReportError> {
    if args.budget == 0 {
        return Err(ReportError::Invalid("budget must be at least 1".into()));
    }
    if !(args.c_puct > 0.0 && args.c_puct.is_finite()) {
        return Err(ReportError::Invalid(format!(
            "c_puct must be positive, got {}",
            args.c_puct
        )));
    }
    let task = builtin_task(&args.task_id, args.task_options)?;
    let root = args
        .root_program
        .as_ref()
        .map(Candidate::program)
        .transpose()
        .map_err(|e| ReportError::Invalid(format!("root program: {e}")))?;
    let generator = build_generator(&args.generator, task.as_ref());
    generator.probe()?;
    let sandbox_limits = args.limits;

    let run_id = match &args.run_id {
        Some(id) => id.clone(),
        None => default_run_id(&args.task_id, args.seed, args.budget, args.c_puct),
    };
    check_run_id(&run_id)?;
    let runs = args.output_root.join("runs");
    fs::create_dir_all(&runs).map_err(io_err(&runs))?;
    let dir = run_dir(&args.output_root, &run_id);
    match fs::create_dir(&dir) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
            return Err(ReportError::RunExists(dir))
        }
        Err(e) => return Err(io_err(&dir)(e)),
    }

    let mut manifest = RunManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        run_id: run_id.clone(),
        task_id: args.task_id.clone(),
        task_inputs: task.input_manifest(),
        generator: generator.descriptor(),
        budget: args.budget,
        c_puct: args.c_puct,
        seed: args.seed,
        limits: LimitsRecord::from(sandbox_limits),
        started_at: now(),
        finished_at: None,
        status: RunStatus::Running,
        error: None,
        node_count: None,
        best: None,
        artifacts: ArtifactPaths {
            state: STATE_FILE.into(),
            tree: TREE_FILE.into(),
            breakthroughs: BREAKTHROUGHS_FILE.into(),
            timings: TIMINGS_FILE.into(),
            nodes_dir: NODES_DIR.into(),
        },
    };
    let manifest_path = dir.join(MANIFEST_FILE);
    write_json(&manifest_path, &manifest)?;

    let outcome = Sandbox::new(dir.join(NODES_DIR), sandbox_limits)
        .map_err(crate::search::SearchError::from)
        .and_then(|sandbox| {
            let opts = SearchOptions {
                budget: args.budget,
                c_puct: args.c_puct,
                seed: args.seed,
                ideas: args.ideas.clone(),
                root,
            };
            run_search_with(task.as_ref(), &generator, &sandbox, &opts, &mut |_, _| {})
        });
    let tree = match outcome {
        Ok(tree) => tree,
        Err(e) => {
            manifest.status = RunStatus::Failed;
            manifest.error = Some(e.to_string());
            manifest.finished_at = Some(now());
            write_json(&manifest_path, &manifest)?;
            return Err(e.into());
        }
    };

    let state = RunState {
        schema_version: STATE_SCHEMA_VERSION,
        run_id: run_id.clone(),
        task_id: args.task_id.clone(),
        tree,
    };
    write_json(&dir.join(STATE_FILE), &state)?;
    let timings: Vec<u64> = state
        .tree
        .nodes()
        .iter()
        .map(|u| u.eval_record.wall_time_ms)
        .collect();
    write_file(&dir.join(TIMINGS_FILE), timings_csv(&state.tree))?;
    let embedded = args.embed_timings.then_some(timings.as_slice());
    write_file(
        &dir.join(TREE_FILE),
        render(&state, ExportKind::Tree, embedded),
    )?;
    write_file(
        &dir.join(BREAKTHROUGHS_FILE),
        render(&state, ExportKind::Breakthroughs, None),
    )?;

    let tree = &state.tree;
    let best_id = tree.best_solution();
    let best_node = &tree.nodes()[best_id];
    let best = BestNode {
        node_id: best_id,
        task_score: best_node.task_score,
        candidate_digest: best_node.candidate.digest(),
        summary: best_node.candidate.summary(),
    };
    manifest.status = RunStatus::Completed;
    manifest.finished_at = Some(now());
    manifest.node_count = Some(tree.len());
    manifest.best = Some(best.clone());
    write_json(&manifest_path, &manifest)?;

    Ok(RunSummary {
        run_id,
        run_dir: dir,
        node_count: tree.len(),
        root_score: tree.nodes()[0].task_score,
        best,
    })
}

/// Re-render an export from a stored run. Reads only; never touches the run directory.
pub fn cmd_export(
    output_root: &Path,
    run_id: &str,
    kind: ExportKind,
    embed_timings: bool,
) -> Result<String, ReportError> {
    check_run_id(run_id)?;
    let dir = run_dir(output_root, run_id);
    let state_path = dir.join(STATE_FILE);
    if !state_path.is_file() {
        return Err(ReportError::MissingRun(dir));
    }
    let state: RunState = read_json(&state_path)?;
    state.tree.validate()?;
    let timings = if embed_timings {
        let t = read_timings(&dir.join(TIMINGS_FILE))?;
        if t.len() != state.tree.len() {
            return Err(ReportError::Invalid(format!(
                "{} lists {} nodes but the tree has {}",
                TIMINGS_FILE,
                t.len(),
                state.tree.len()
            )));
        }
        Some(t)
    } else {
        None
    };
    Ok(render(&state, kind, timings.as_deref()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_ids() {
        assert_eq!(
            default_run_id("synthetic", 7, 50, 1.0),
            "synthetic-s7-b50-c1"
        );
        assert_eq!(
            default_run_id("forecast", 0, 3, 0.25),
            "forecast-s0-b3-c0.25"
        );
        assert!(check_run_id("synthetic-s7-b50-c1").is_ok());
        for bad in ["", "../x", ".hidden", "a/b", "a b"] {
            assert!(check_run_id(bad).is_err(), "{bad}");
        }
    }
}
