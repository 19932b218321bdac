// SPDX-License-Identifier: Apache-2.0

/// Keeps the last `cap` bytes written to it.
#[derive(Debug, Clone, Default)]
pub struct TailBuffer {
    cap: usize,
    bytes: Vec<u8>,
    dropped: usize,
}

impl TailBuffer {
    pub fn new(cap: usize) -> Self {
        Self {
            cap,
            bytes: Vec::new(),
            dropped: 0,
        }
    }

    pub fn push(&mut self, data: &[u8]) {
        self.bytes.extend_from_slice(data);
        // trim in batches so long streams stay linear
        if self.bytes.len() > 2 * self.cap.max(1) {
            let excess = self.bytes.len() - self.cap;
            self.bytes.drain(..excess);
            self.dropped += excess;
        }
    }

    pub fn dropped(&self) -> usize {
        self.dropped + self.bytes.len().saturating_sub(self.cap)
    }

    pub fn to_string_lossy_capped(&self, cap: usize) -> String {
        excerpt(&self.bytes, cap.min(self.cap.max(1)))
    }
}

/// The last `cap` bytes of `bytes` as text, cut on a character boundary.
pub fn excerpt(bytes: &[u8], cap: usize) -> String {
    let start = bytes.len().saturating_sub(cap);
    let text = String::from_utf8_lossy(&bytes[start..]).into_owned();
    if text.len() <= cap {
        return text;
    }
    // replacement characters can grow the text past the cap
    let mut cut = text.len() - cap;
    while !text.is_char_boundary(cut) {
        cut += 1;
    }
    text[cut..].to_string()
}

/// Score from the final non-empty line of `stdout`, which must read
/// `SCORE <decimal>` with a finite value.
pub fn parse_score_line(stdout: &str) -> Result<f64, String> {
    let last = stdout
        .lines()
        .rev()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| "no output; expected a final `SCORE <decimal>` line".to_string())?;
    let rest = last
        .trim()
        .strip_prefix("SCORE ")
        .ok_or_else(|| format!("last line is not a score line: `{}`", last.trim()))?;
    let value: f64 = rest
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse score `{}`", rest.trim()))?;
    if !value.is_finite() {
        return Err(format!("score must be finite, got `{}`", rest.trim()));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn score_lines() {
        assert_eq!(parse_score_line("working\nSCORE 0.5\n"), Ok(0.5));
        assert_eq!(parse_score_line("SCORE -1e-3\n\n"), Ok(-1e-3));
        assert!(parse_score_line("SCORE 0.5\nbye\n").is_err());
        assert!(parse_score_line("SCORE abc").is_err());
        assert!(parse_score_line("SCORE inf").is_err());
        assert!(parse_score_line("").is_err());
        assert!(parse_score_line("score 1").is_err());
    }

    #[test]
    fn tail_buffer_keeps_the_end() {
        let mut b = TailBuffer::new(4);
        for chunk in [b"abc".as_slice(), b"defgh", b"ij"] {
            b.push(chunk);
        }
        assert_eq!(b.to_string_lossy_capped(4), "ghij");
        assert_eq!(b.dropped(), 6);
    }

    #[test]
    fn excerpt_respects_char_boundaries() {
        let s = "ééé";
        let e = excerpt(s.as_bytes(), 3);
        assert!(e.len() <= 3);
        assert_eq!(e, "é");
    }

    proptest! {
        #[test]
        fn score_round_trips_through_text(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let line = format!("noise\nSCORE {v}\n");
            prop_assert_eq!(parse_score_line(&line).unwrap().to_bits(), v.to_bits());
            let exp = format!("SCORE {v:e}");
            prop_assert_eq!(parse_score_line(&exp).unwrap().to_bits(), v.to_bits());
        }
    }
}
