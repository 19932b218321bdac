// SPDX-License-Identifier: Apache-2.0

//! Runs candidates and turns whatever happens into an [`ExecutionRecord`].
//!
//! Parameter configs are scored in-process. Program text is written to a
//! per-node scratch directory next to read-only copies of the task inputs
//! and launched as its own process group, so a timeout can take down
//! everything the candidate started. The program reports its score by
//! printing `SCORE <decimal>` as the last line of standard output.

mod output;

use std::fs;
use std::io::Read;
use std::os::unix::fs::PermissionsExt;
use std::os::unix::process::{CommandExt, ExitStatusExt};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mutation::{Candidate, Payload};
use crate::tasks::ScorableTask;

pub use output::{excerpt, parse_score_line, TailBuffer};

pub const DEFAULT_WALL_TIME: Duration = Duration::from_secs(300);
pub const DEFAULT_OUTPUT_BYTES: usize = 256 * 1024;

/// File name of the program payload inside a node directory.
pub const PROGRAM_FILE: &str = "candidate";
/// Sub-directory holding read-only copies of the task inputs.
pub const INPUT_DIR: &str = "inputs";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecStatus {
    Ok,
    Timeout,
    Crashed,
    BadOutput,
    /// The generator never produced a candidate to run.
    GenerationFailed,
}

impl ExecStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ExecStatus::Ok => "ok",
            ExecStatus::Timeout => "timeout",
            ExecStatus::Crashed => "crashed",
            ExecStatus::BadOutput => "bad_output",
            ExecStatus::GenerationFailed => "generation_failed",
        }
    }
}

/// What happened when a candidate ran. `status` is `Ok` exactly when
/// `score` is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionRecord {
    pub status: ExecStatus,
    #[serde(with = "crate::ext_real")]
    pub score: f64,
    /// Kept out of serialized records so that stored run state is reproducible.
    #[serde(skip)]
    pub wall_time_ms: u64,
    pub stdout_excerpt: String,
    pub stderr_excerpt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifacts_dir: Option<PathBuf>,
    /// Address-space cap requested for the process, if any. Best effort.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory_limit_bytes: Option<u64>,
}

impl ExecutionRecord {
    pub fn ok(score: f64) -> Self {
        Self::with_status(ExecStatus::Ok, score, String::new())
    }

    pub fn failed(status: ExecStatus, stderr: impl Into<String>) -> Self {
        assert!(status != ExecStatus::Ok, "a failure needs a failing status");
        Self::with_status(status, f64::NEG_INFINITY, stderr.into())
    }

    fn with_status(status: ExecStatus, score: f64, stderr: String) -> Self {
        Self {
            status,
            score,
            wall_time_ms: 0,
            stdout_excerpt: String::new(),
            stderr_excerpt: stderr,
            artifacts_dir: None,
            memory_limit_bytes: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    pub wall_time: Duration,
    /// Cap on each captured stream; the tail is kept.
    pub output_bytes: usize,
    pub memory_bytes: Option<u64>,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            wall_time: DEFAULT_WALL_TIME,
            output_bytes: DEFAULT_OUTPUT_BYTES,
            memory_bytes: None,
        }
    }
}

/// Failures of the executor itself, as opposed to the candidate.
#[derive(Debug, Error)]
pub enum SandboxError {
    #[error("limits must be positive")]
    InvalidLimits,
    #[error("scratch directory {path}")]
    Scratch {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot launch `{program}`")]
    Spawn {
        program: String,
        #[source]
        source: std::io::Error,
    },
    #[error("task has no launcher for program candidates")]
    NoLauncher,
}

fn scratch_err(path: &Path) -> impl FnOnce(std::io::Error) -> SandboxError + '_ {
    move |source| SandboxError::Scratch {
        path: path.to_path_buf(),
        source,
    }
}

/// Executor bound to one run's `nodes/` directory.
#[derive(Debug, Clone)]
pub struct Sandbox {
    nodes_root: PathBuf,
    limits: Limits,
}

impl Sandbox {
    pub fn new(nodes_root: impl Into<PathBuf>, limits: Limits) -> Result<Self, SandboxError> {
        if limits.wall_time.is_zero() || limits.output_bytes == 0 || limits.memory_bytes == Some(0)
        {
            return Err(SandboxError::InvalidLimits);
        }
        Ok(Self {
            nodes_root: nodes_root.into(),
            limits,
        })
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn node_dir(&self, node_id: usize) -> PathBuf {
        self.nodes_root.join(node_id.to_string())
    }

    pub fn execute(
        &self,
        node_id: usize,
        candidate: &Candidate,
        task: &dyn ScorableTask,
    ) -> Result<ExecutionRecord, SandboxError> {
        let start = Instant::now();
        let mut record = match &candidate.payload {
            Payload::ParameterConfig(cfg) => self.score_in_process(cfg, task),
            Payload::ProgramText(text) => self.run_program(node_id, text, task)?,
        };
        record.wall_time_ms = start.elapsed().as_millis() as u64;
        if record.status == ExecStatus::Ok && start.elapsed() > self.limits.wall_time {
            // in-process scoring cannot be interrupted, so overruns are judged afterwards
            record = ExecutionRecord {
                wall_time_ms: record.wall_time_ms,
                ..ExecutionRecord::failed(
                    ExecStatus::Timeout,
                    "scoring exceeded the wall-time limit",
                )
            };
        }
        Ok(record)
    }

    fn score_in_process(
        &self,
        cfg: &crate::mutation::ParamConfig,
        task: &dyn ScorableTask,
    ) -> ExecutionRecord {
        let cap = self.limits.output_bytes;
        match panic::catch_unwind(AssertUnwindSafe(|| task.score_config(cfg))) {
            Ok(Ok(score)) if score.is_finite() => ExecutionRecord::ok(score),
            Ok(Ok(score)) => {
                ExecutionRecord::failed(ExecStatus::BadOutput, format!("scorer returned {score}"))
            }
            Ok(Err(e)) => {
                ExecutionRecord::failed(ExecStatus::Crashed, excerpt(e.to_string().as_bytes(), cap))
            }
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| payload.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "scorer panicked".into());
                ExecutionRecord::failed(
                    ExecStatus::Crashed,
                    excerpt(format!("panic: {msg}").as_bytes(), cap),
                )
            }
        }
    }

    fn prepare_node(
        &self,
        node_id: usize,
        program: &str,
        task: &dyn ScorableTask,
    ) -> Result<PathBuf, SandboxError> {
        let dir = self.node_dir(node_id);
        let inputs = dir.join(INPUT_DIR);
        fs::create_dir_all(&inputs).map_err(scratch_err(&inputs))?;
        for file in task.inputs() {
            let path = inputs.join(&file.name);
            fs::write(&path, &file.bytes).map_err(scratch_err(&path))?;
            fs::set_permissions(&path, fs::Permissions::from_mode(0o444))
                .map_err(scratch_err(&path))?;
        }
        let program_path = dir.join(PROGRAM_FILE);
        fs::write(&program_path, program).map_err(scratch_err(&program_path))?;
        fs::set_permissions(&program_path, fs::Permissions::from_mode(0o555))
            .map_err(scratch_err(&program_path))?;
        Ok(dir)
    }

    fn run_program(
        &self,
        node_id: usize,
        program: &str,
        task: &dyn ScorableTask,
    ) -> Result<ExecutionRecord, SandboxError> {
        let dir = self.prepare_node(node_id, program, task)?;
        let launcher = task.program_launcher();
        let (exe, args) = launcher.split_first().ok_or(SandboxError::NoLauncher)?;

        let mut cmd = Command::new(exe);
        cmd.args(args)
            .arg(dir.join(PROGRAM_FILE))
            .current_dir(&dir)
            .env("SCORCH_INPUT_DIR", dir.join(INPUT_DIR))
            .env("SCORCH_NODE_DIR", &dir)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .process_group(0);
        if let Some(bytes) = self.limits.memory_bytes {
            // SAFETY: setrlimit is async-signal-safe and touches no parent state.
            unsafe {
                cmd.pre_exec(move || {
                    let lim = libc::rlimit {
                        rlim_cur: bytes as libc::rlim_t,
                        rlim_max: bytes as libc::rlim_t,
                    };
                    // best effort: a platform refusing the limit should not stop the run
                    let _ = libc::setrlimit(libc::RLIMIT_AS, &lim);
                    Ok(())
                });
            }
        }
        let mut child = cmd.spawn().map_err(|source| SandboxError::Spawn {
            program: exe.clone(),
            source,
        })?;

        let cap = self.limits.output_bytes;
        let stdout = spawn_reader(child.stdout.take().expect("piped stdout"), cap);
        let stderr = spawn_reader(child.stderr.take().expect("piped stderr"), cap);

        let deadline = Instant::now() + self.limits.wall_time;
        let mut timed_out = false;
        let status = loop {
            match child.try_wait() {
                Ok(Some(status)) => break Some(status),
                Ok(None) if Instant::now() >= deadline => {
                    timed_out = true;
                    kill_group(child.id());
                    break child.wait().ok();
                }
                Ok(None) => thread::sleep(Duration::from_millis(5)),
                Err(_) => {
                    kill_group(child.id());
                    break child.wait().ok();
                }
            }
        };
        // the group may have left stragglers holding the pipes; they were killed
        // with it, but don't wait forever on a process that escaped the group
        kill_group(child.id());
        let out = stdout
            .recv_timeout(Duration::from_secs(2))
            .unwrap_or_default();
        let err = stderr
            .recv_timeout(Duration::from_secs(2))
            .unwrap_or_default();

        let stdout_excerpt = out.to_string_lossy_capped(cap);
        let stderr_excerpt = err.to_string_lossy_capped(cap);
        let mut record = if timed_out {
            ExecutionRecord::failed(ExecStatus::Timeout, String::new())
        } else {
            match status {
                Some(s) if s.success() => match parse_score_line(&stdout_excerpt) {
                    Ok(score) => ExecutionRecord::ok(score),
                    Err(why) => ExecutionRecord::failed(ExecStatus::BadOutput, why),
                },
                Some(s) => {
                    let why = match (s.code(), s.signal()) {
                        (Some(code), _) => format!("exit code {code}"),
                        (None, Some(sig)) => format!("killed by signal {sig}"),
                        _ => "abnormal exit".to_string(),
                    };
                    ExecutionRecord::failed(ExecStatus::Crashed, why)
                }
                None => {
                    ExecutionRecord::failed(ExecStatus::Crashed, "lost track of the child process")
                }
            }
        };
        // keep the candidate's own stderr; the reason goes first when there is one
        if !stderr_excerpt.is_empty() {
            record.stderr_excerpt = if record.stderr_excerpt.is_empty() {
                stderr_excerpt
            } else {
                excerpt(
                    format!("{}\n{}", record.stderr_excerpt, stderr_excerpt).as_bytes(),
                    cap,
                )
            };
        }
        record.stdout_excerpt = stdout_excerpt;
        record.artifacts_dir = Some(dir);
        record.memory_limit_bytes = self.limits.memory_bytes;
        Ok(record)
    }
}

fn kill_group(pid: u32) {
    // SAFETY: plain syscall; a stale or foreign group id only yields ESRCH/EPERM.
    unsafe {
        libc::kill(-(pid as libc::pid_t), libc::SIGKILL);
    }
}

fn spawn_reader<R: Read + Send + 'static>(mut stream: R, cap: usize) -> mpsc::Receiver<TailBuffer> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let mut buf = TailBuffer::new(cap);
        let mut chunk = [0u8; 8192];
        loop {
            match stream.read(&mut chunk) {
                Ok(0) | Err(_) => break,
                Ok(n) => buf.push(&chunk[..n]),
            }
        }
        let _ = tx.send(buf);
    });
    rx
}
