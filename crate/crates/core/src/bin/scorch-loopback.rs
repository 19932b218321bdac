// SPDX-License-Identifier: Apache-2.0

//! Reference generator for the external protocol. Reads one JSON request
//! per line on stdin and answers on stdout.
//!
//! Modes (first argument):
//!   echo            reply with the parent payload and its digest
//!   append          like echo, but program text gains a `# seed N` line
//!   error           reply with an error message
//!   garbage         reply with a line that is not JSON
//!   bad-digest      echo with a digest that does not match
//!   sleep SECS      wait SECS seconds, then echo
//!   flaky N         fail the first N requests, then echo

use std::io::{self, BufRead, Write};
use std::process::ExitCode;
use std::time::Duration;

use scorch_core::mutation::Payload;
use serde_json::json;

enum Mode {
    Echo,
    Append,
    Error,
    Garbage,
    BadDigest,
    Sleep(f64),
    Flaky(usize),
}

fn parse_mode(args: &[String]) -> Result<Mode, String> {
    let num = |what: &str| -> Result<f64, String> {
        args.get(1)
            .ok_or_else(|| format!("{what} needs a number"))?
            .parse()
            .map_err(|_| format!("{what} needs a number"))
    };
    match args.first().map(String::as_str).unwrap_or("echo") {
        "echo" => Ok(Mode::Echo),
        "append" => Ok(Mode::Append),
        "error" => Ok(Mode::Error),
        "garbage" => Ok(Mode::Garbage),
        "bad-digest" => Ok(Mode::BadDigest),
        "sleep" => Ok(Mode::Sleep(num("sleep")?)),
        "flaky" => Ok(Mode::Flaky(num("flaky")? as usize)),
        other => Err(format!("unknown mode `{other}`")),
    }
}

fn reply(mode: &Mode, served: usize, line: &str) -> String {
    let req: serde_json::Value = match serde_json::from_str(line) {
        Ok(v) => v,
        Err(e) => return json!({ "error": format!("bad request: {e}") }).to_string(),
    };
    let parent: Payload = match serde_json::from_value(req["parent_payload"].clone()) {
        Ok(p) => p,
        Err(e) => return json!({ "error": format!("bad parent payload: {e}") }).to_string(),
    };
    let seed = req["seed"].as_u64().unwrap_or(0);
    let echo = |payload: Payload| {
        let digest = payload.digest();
        json!({ "child_payload": payload, "payload_digest": digest }).to_string()
    };
    match mode {
        Mode::Echo => echo(parent),
        Mode::Append => match parent {
            Payload::ProgramText(text) => {
                echo(Payload::ProgramText(format!("{text}\n# seed {seed}")))
            }
            other => echo(other),
        },
        Mode::Error => json!({ "error": "loopback refuses" }).to_string(),
        Mode::Garbage => "this is not json".to_string(),
        Mode::BadDigest => json!({ "child_payload": parent, "payload_digest": "00" }).to_string(),
        Mode::Sleep(secs) => {
            std::thread::sleep(Duration::from_secs_f64(*secs));
            echo(parent)
        }
        Mode::Flaky(n) if served < *n => {
            json!({ "error": format!("flaky failure {}", served + 1) }).to_string()
        }
        Mode::Flaky(_) => echo(parent),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mode = match parse_mode(&args) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("scorch-loopback: {e}");
            return ExitCode::from(2);
        }
    };
    let stdin = io::stdin();
    let mut stdout = io::stdout().lock();
    for (served, line) in stdin.lock().lines().enumerate() {
        let Ok(line) = line else { break };
        let out = reply(&mode, served, &line);
        if writeln!(stdout, "{out}")
            .and_then(|_| stdout.flush())
            .is_err()
        {
            break;
        }
    }
    ExitCode::SUCCESS
}
