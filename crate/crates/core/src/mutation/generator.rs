// SPDX-License-Identifier: Apache-2.0

//! Generator handles: the built-in mutator or an external process / HTTP
//! endpoint speaking the line-delimited JSON protocol.
//!
//! Request:  `{"protocol_version":1,"parent_payload":{..},"advice":{..},"seed":N}`
//! Response: `{"child_payload":{..}}` (optionally with `"payload_digest"`) or `{"error":".."}`

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{mutate_config, AdviceBundle, Candidate, GenerationError, MutationSchedule, Payload};

pub const PROTOCOL_VERSION: u32 = 1;
pub const DEFAULT_GENERATOR_TIMEOUT: Duration = Duration::from_secs(120);

#[derive(Debug, Serialize)]
pub struct GenerateRequest<'a> {
    pub protocol_version: u32,
    pub parent_payload: &'a Payload,
    pub advice: &'a AdviceBundle,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GenerateResponse {
    Child {
        child_payload: Payload,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        payload_digest: Option<String>,
    },
    Failure {
        error: String,
    },
}

/// Where an external generator lives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "transport", rename_all = "snake_case")]
pub enum Endpoint {
    Process { program: String, args: Vec<String> },
    Http { url: String },
}

struct Session {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
}

impl Session {
    fn spawn(program: &str, args: &[String]) -> Result<Self, GenerationError> {
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| GenerationError::Unavailable(format!("cannot start `{program}`: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(Self {
            child,
            stdin,
            lines: rx,
        })
    }

    fn kill(mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// A generator reached over stdio or HTTP. Calls on one handle are serialized.
pub struct ExternalGenerator {
    endpoint: Endpoint,
    timeout: Duration,
    session: Mutex<Option<Session>>,
}

impl std::fmt::Debug for ExternalGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExternalGenerator")
            .field("endpoint", &self.endpoint)
            .field("timeout", &self.timeout)
            .finish()
    }
}

impl ExternalGenerator {
    pub fn new(endpoint: Endpoint, timeout: Duration) -> Self {
        Self {
            endpoint,
            timeout,
            session: Mutex::new(None),
        }
    }

    pub fn endpoint(&self) -> &Endpoint {
        &self.endpoint
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }

    /// Check the endpoint can be reached at all (process starts, socket connects).
    pub fn probe(&self) -> Result<(), GenerationError> {
        match &self.endpoint {
            Endpoint::Process { program, args } => {
                let mut guard = self.session.lock().expect("generator lock");
                if guard.is_none() {
                    *guard = Some(Session::spawn(program, args)?);
                }
                Ok(())
            }
            Endpoint::Http { url } => {
                let parsed: ureq::http::Uri = url
                    .parse()
                    .map_err(|e| GenerationError::Unavailable(format!("bad url `{url}`: {e}")))?;
                let host = parsed.host().ok_or_else(|| {
                    GenerationError::Unavailable(format!("url `{url}` has no host"))
                })?;
                let port = parsed.port_u16().unwrap_or(80);
                std::net::TcpStream::connect((host, port))
                    .map(|_| ())
                    .map_err(|e| {
                        GenerationError::Unavailable(format!("cannot reach {host}:{port}: {e}"))
                    })
            }
        }
    }

    pub fn request(&self, req: &GenerateRequest<'_>) -> Result<GenerateResponse, GenerationError> {
        match &self.endpoint {
            Endpoint::Process { program, args } => self.request_stdio(program, args, req),
            Endpoint::Http { url } => self.request_http(url, req),
        }
    }

    fn request_stdio(
        &self,
        program: &str,
        args: &[String],
        req: &GenerateRequest<'_>,
    ) -> Result<GenerateResponse, GenerationError> {
        let mut guard = self.session.lock().expect("generator lock");
        if guard.is_none() {
            *guard = Some(Session::spawn(program, args)?);
        }
        let session = guard.as_mut().expect("session present");

        let mut line = serde_json::to_string(req).expect("request serializes");
        line.push('\n');
        let sent = session
            .stdin
            .write_all(line.as_bytes())
            .and_then(|_| session.stdin.flush());
        if let Err(e) = sent {
            if let Some(s) = guard.take() {
                s.kill();
            }
            return Err(GenerationError::Protocol(format!(
                "generator closed its input: {e}"
            )));
        }

        let reply = match session.lines.recv_timeout(self.timeout) {
            Ok(Ok(reply)) => reply,
            Ok(Err(e)) => {
                if let Some(s) = guard.take() {
                    s.kill();
                }
                return Err(GenerationError::Protocol(format!(
                    "reading generator output: {e}"
                )));
            }
            Err(RecvTimeoutError::Timeout) => {
                // a late reply would desynchronise the stream, so start over next time
                if let Some(s) = guard.take() {
                    s.kill();
                }
                return Err(GenerationError::Timeout(self.timeout));
            }
            Err(RecvTimeoutError::Disconnected) => {
                if let Some(s) = guard.take() {
                    s.kill();
                }
                return Err(GenerationError::Protocol(
                    "generator exited without replying".into(),
                ));
            }
        };
        serde_json::from_str(&reply)
            .map_err(|e| GenerationError::Protocol(format!("malformed response: {e}")))
    }

    fn request_http(
        &self,
        url: &str,
        req: &GenerateRequest<'_>,
    ) -> Result<GenerateResponse, GenerationError> {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let mut resp = agent.post(url).send_json(req).map_err(|e| match e {
            ureq::Error::Timeout(_) => GenerationError::Timeout(self.timeout),
            ureq::Error::Io(io) if io.kind() == std::io::ErrorKind::ConnectionRefused => {
                GenerationError::Unavailable(io.to_string())
            }
            other => GenerationError::Protocol(other.to_string()),
        })?;
        let status = resp.status();
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| GenerationError::Protocol(format!("reading response body: {e}")))?;
        match serde_json::from_str(&body) {
            Ok(parsed) => Ok(parsed),
            Err(_) if !status.is_success() => {
                Err(GenerationError::Remote(format!("HTTP {status}: {body}")))
            }
            Err(e) => Err(GenerationError::Protocol(format!(
                "malformed response: {e}"
            ))),
        }
    }
}

impl Drop for ExternalGenerator {
    fn drop(&mut self) {
        if let Ok(mut guard) = self.session.lock() {
            if let Some(session) = guard.take() {
                session.kill();
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub candidate: Candidate,
    /// True when the mutator had nothing to change and returned the parent payload.
    pub exhausted: bool,
}

/// Source of child candidates.
#[derive(Debug)]
pub enum GeneratorHandle {
    Mutator(MutationSchedule),
    External(ExternalGenerator),
}

impl GeneratorHandle {
    pub fn generate(
        &self,
        parent: &Candidate,
        advice: &AdviceBundle,
        seed: u64,
    ) -> Result<Generated, GenerationError> {
        match self {
            GeneratorHandle::Mutator(schedule) => {
                let cfg = parent.as_config().ok_or_else(|| {
                    GenerationError::Protocol("the mutator only handles parameter configs".into())
                })?;
                let m = mutate_config(cfg, schedule, seed)?;
                let candidate =
                    Candidate::child_of(parent, Payload::ParameterConfig(m.config), None)?;
                Ok(Generated {
                    candidate,
                    exhausted: m.exhausted,
                })
            }
            GeneratorHandle::External(ext) => {
                let req = GenerateRequest {
                    protocol_version: PROTOCOL_VERSION,
                    parent_payload: &parent.payload,
                    advice,
                    seed,
                };
                match ext.request(&req)? {
                    GenerateResponse::Failure { error } => Err(GenerationError::Remote(error)),
                    GenerateResponse::Child {
                        child_payload,
                        payload_digest,
                    } => {
                        let digest = child_payload.digest();
                        if let Some(claimed) = payload_digest {
                            if !claimed.eq_ignore_ascii_case(&digest) {
                                return Err(GenerationError::Protocol(format!(
                                    "payload digest mismatch: generator sent {claimed}, payload hashes to {digest}"
                                )));
                            }
                        }
                        let candidate =
                            Candidate::child_of(parent, child_payload, Some(advice.clone()))?;
                        Ok(Generated {
                            candidate,
                            exhausted: false,
                        })
                    }
                }
            }
        }
    }

    pub fn probe(&self) -> Result<(), GenerationError> {
        match self {
            GeneratorHandle::Mutator(schedule) => Ok(schedule.validate()?),
            GeneratorHandle::External(ext) => ext.probe(),
        }
    }

    /// Machine-readable description for run manifests.
    pub fn descriptor(&self) -> serde_json::Value {
        match self {
            GeneratorHandle::Mutator(schedule) => serde_json::json!({
                "kind": "deterministic_mutator",
                "schedule": schedule,
            }),
            GeneratorHandle::External(ext) => serde_json::json!({
                "kind": "external_process",
                "endpoint": ext.endpoint(),
                "timeout_s": ext.timeout().as_secs_f64(),
                "protocol_version": PROTOCOL_VERSION,
            }),
        }
    }
}
