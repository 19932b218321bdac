// SPDX-License-Identifier: Apache-2.0

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::thread;
use std::time::Duration;

use scorch_core::mutation::{
    build_advice, Candidate, Endpoint, ExternalGenerator, GenerationError, GeneratorHandle, Payload,
};

fn loopback(mode: &[&str], timeout: Duration) -> GeneratorHandle {
    GeneratorHandle::External(ExternalGenerator::new(
        Endpoint::Process {
            program: env!("CARGO_BIN_EXE_scorch-loopback").into(),
            args: mode.iter().map(|s| s.to_string()).collect(),
        },
        timeout,
    ))
}

fn parent() -> Candidate {
    Candidate::program("echo SCORE 1").unwrap()
}

const T: Duration = Duration::from_secs(10);

#[test]
fn echo_round_trip_preserves_the_digest() {
    let gen = loopback(&["echo"], T);
    gen.probe().unwrap();
    let advice = build_advice("task", &["idea one".into()], None);
    let p = parent();
    let child = gen.generate(&p, &advice, 5).unwrap().candidate;
    assert_eq!(child.digest(), p.digest());
    assert_eq!(child.parent_digest.as_deref(), Some(p.digest().as_str()));
    assert_eq!(child.advice_context.as_ref(), Some(&advice));
    // the session is reused across calls
    let again = gen.generate(&p, &advice, 6).unwrap().candidate;
    assert_eq!(again.payload, p.payload);
}

#[test]
fn config_payloads_survive_the_wire() {
    let gen = loopback(&["echo"], T);
    let cfg = Candidate::config(
        [
            ("a".to_string(), 0.1.into()),
            ("b".to_string(), "median".into()),
        ]
        .into_iter()
        .collect(),
    )
    .unwrap();
    let child = gen
        .generate(&cfg, &build_advice("t", &[], None), 1)
        .unwrap()
        .candidate;
    assert_eq!(child.payload, cfg.payload);
}

#[test]
fn append_mode_changes_programs() {
    let gen = loopback(&["append"], T);
    let child = gen
        .generate(&parent(), &build_advice("t", &[], None), 42)
        .unwrap()
        .candidate;
    assert_eq!(
        child.payload,
        Payload::ProgramText("echo SCORE 1\n# seed 42".into())
    );
}

#[test]
fn failures_are_classified() {
    let advice = build_advice("t", &[], None);
    let cases: [(&[&str], fn(&GenerationError) -> bool); 3] = [
        (&["error"], |e| matches!(e, GenerationError::Remote(_))),
        (&["garbage"], |e| matches!(e, GenerationError::Protocol(_))),
        (
            &["bad-digest"],
            |e| matches!(e, GenerationError::Protocol(m) if m.contains("digest")),
        ),
    ];
    for (mode, check) in cases {
        let err = loopback(mode, T)
            .generate(&parent(), &advice, 0)
            .unwrap_err();
        assert!(check(&err), "{mode:?}: {err}");
    }
}

#[test]
fn timeout_then_recovery() {
    let gen = loopback(&["sleep", "2"], Duration::from_millis(300));
    let advice = build_advice("t", &[], None);
    let err = gen.generate(&parent(), &advice, 0).unwrap_err();
    assert!(matches!(err, GenerationError::Timeout(_)), "{err}");
    // a fresh process is started for the next request; it is just as slow
    assert!(matches!(
        gen.generate(&parent(), &advice, 0),
        Err(GenerationError::Timeout(_))
    ));

    let flaky = loopback(&["flaky", "2"], T);
    assert!(flaky.generate(&parent(), &advice, 0).is_err());
    assert!(flaky.generate(&parent(), &advice, 0).is_err());
    assert!(flaky.generate(&parent(), &advice, 0).is_ok());
}

#[test]
fn missing_program_is_unavailable() {
    let gen = GeneratorHandle::External(ExternalGenerator::new(
        Endpoint::Process {
            program: "/definitely/not/here".into(),
            args: vec![],
        },
        T,
    ));
    assert!(matches!(gen.probe(), Err(GenerationError::Unavailable(_))));
}

/// Serves `n` HTTP requests, answering each with `respond(body)`.
fn serve(n: usize, respond: fn(&str) -> (u16, String)) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || {
        let mut served = 0;
        for stream in listener.incoming() {
            if served == n {
                break;
            }
            let mut stream = stream.unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut len = 0usize;
            let mut request_line = String::new();
            if reader.read_line(&mut request_line).unwrap_or(0) == 0 {
                // a bare connect, as made by probe()
                continue;
            }
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if line == "\r\n" || line.is_empty() {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
            }
            let mut body = vec![0; len];
            reader.read_exact(&mut body).unwrap();
            let (status, reply) = respond(&String::from_utf8(body).unwrap());
            write!(
                stream,
                "HTTP/1.1 {status} X\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{reply}",
                reply.len()
            )
            .unwrap();
            served += 1;
        }
    });
    format!("http://{addr}/generate")
}

fn http(url: String) -> GeneratorHandle {
    GeneratorHandle::External(ExternalGenerator::new(Endpoint::Http { url }, T))
}

#[test]
fn http_round_trip() {
    let url = serve(1, |body| {
        let req: serde_json::Value = serde_json::from_str(body).unwrap();
        assert_eq!(req["protocol_version"], 1);
        assert_eq!(req["advice"]["task_description"], "t");
        let reply = serde_json::json!({
            "child_payload": { "kind": "program_text", "value": format!("echo SCORE {}", req["seed"]) }
        });
        (200, reply.to_string())
    });
    let gen = http(url);
    gen.probe().unwrap();
    let child = gen
        .generate(&parent(), &build_advice("t", &[], None), 9)
        .unwrap()
        .candidate;
    assert_eq!(child.payload, Payload::ProgramText("echo SCORE 9".into()));
}

#[test]
fn http_errors() {
    let url = serve(1, |_| (500, "upstream exploded".into()));
    let err = http(url)
        .generate(&parent(), &build_advice("t", &[], None), 0)
        .unwrap_err();
    assert!(
        matches!(&err, GenerationError::Remote(m) if m.contains("500")),
        "{err}"
    );

    let url = serve(1, |_| (200, r#"{"error":"no idea"}"#.into()));
    let err = http(url)
        .generate(&parent(), &build_advice("t", &[], None), 0)
        .unwrap_err();
    assert!(
        matches!(&err, GenerationError::Remote(m) if m == "no idea"),
        "{err}"
    );

    let closed = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap();
    assert!(http(format!("http://{closed}/")).probe().is_err());
}
