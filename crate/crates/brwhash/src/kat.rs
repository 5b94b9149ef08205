//! Known-answer records: one JSON object per line.
//!
//! A record pins down one hash invocation completely -- algorithm, prime,
//! key, message, and the parameters that matter for the digest -- plus the
//! expected digest. Files of these lines are what `brwhash kat generate`
//! writes and `brwhash kat verify` checks, and they are stable across
//! backends because every backend produces identical digests.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::counters::OpCounters;
use crate::hash::{brwhash, decbrw_hash, poly1305, polyhash, Backend};
use crate::params::{PrimeConfig, P1271, P1305};

/// One known-answer line. All hex is lowercase. `g`, `t`, and `c` appear
/// only where they apply (and `t` only for documentation: leaf order never
/// changes a digest).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KatRecord {
    pub algo: String,
    pub prime: u32,
    pub key_hex: String,
    pub msg_hex: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    pub digest_hex: String,
}

/// What can go wrong reading, writing, or recomputing records.
#[derive(Debug, thiserror::Error)]
pub enum KatError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("line {line}: hex field: {source}")]
    Hex {
        line: usize,
        source: hex::FromHexError,
    },
    #[error("unknown algorithm {0:?}")]
    UnknownAlgo(String),
    #[error("unknown prime {0}; expected 1305 or 1271")]
    UnknownPrime(u32),
    #[error(transparent)]
    Hash(#[from] crate::error::Error),
}

fn config_for(prime: u32) -> Result<&'static PrimeConfig, KatError> {
    match prime {
        1305 => Ok(&P1305),
        1271 => Ok(&P1271),
        other => Err(KatError::UnknownPrime(other)),
    }
}

/// Recomputes the digest a record describes, as lowercase hex. The caller
/// compares it with `digest_hex` to verify the record.
///
/// `backend` is a preference, not a requirement: algorithms or parameter
/// choices without a packed path (brwhash always, decbrw unless c = 4)
/// fall back to scalar, so one flag can drive a whole mixed file. Digests
/// are backend-independent, making cross-backend verification a real
/// check rather than a formality.
pub fn compute_digest(record: &KatRecord, backend: Backend) -> Result<String, KatError> {
    let key = hex::decode(&record.key_hex).map_err(|source| KatError::Hex { line: 0, source })?;
    let msg = hex::decode(&record.msg_hex).map_err(|source| KatError::Hex { line: 0, source })?;
    let mut counters = OpCounters::new();
    let digest = match record.algo.as_str() {
        "polyhash" => polyhash(
            &key,
            &msg,
            record.g.unwrap_or(1),
            backend,
            config_for(record.prime)?,
            &mut counters,
        )?,
        "brwhash" => brwhash(
            &key,
            &msg,
            record.t.unwrap_or(2),
            config_for(record.prime)?,
            &mut counters,
        )?,
        "decbrw" => {
            let streams = record.c.unwrap_or(4);
            let effective = if streams == 4 { backend } else { Backend::Scalar };
            decbrw_hash(
                &key,
                &msg,
                streams,
                record.t.unwrap_or(2),
                effective,
                config_for(record.prime)?,
                &mut counters,
            )?
        }
        "poly1305" => {
            config_for(record.prime)?;
            poly1305(&key, &msg, 1, backend, &mut counters)?
        }
        other => return Err(KatError::UnknownAlgo(other.to_string())),
    };
    Ok(hex::encode(digest))
}

/// Writes records as JSON lines.
pub fn write_records<W: Write>(mut writer: W, records: &[KatRecord]) -> Result<(), KatError> {
    for record in records {
        let line = serde_json::to_string(record)
            .map_err(|source| KatError::Json { line: 0, source })?;
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

/// Reads JSON-line records, skipping blank lines; errors carry the
/// 1-based line number.
pub fn read_records<R: BufRead>(reader: R) -> Result<Vec<KatRecord>, KatError> {
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line)
            .map_err(|source| KatError::Json { line: idx + 1, source })?;
        records.push(record);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json_lines() {
        let records = vec![
            KatRecord {
                algo: "polyhash".into(),
                prime: 1305,
                key_hex: "000102030405060708090a0b0c0d0e0f".into(),
                msg_hex: "".into(),
                g: Some(2),
                t: None,
                c: None,
                digest_hex: "00000000000000000000000000000000".into(),
            },
            KatRecord {
                algo: "decbrw".into(),
                prime: 1271,
                key_hex: "ffeeddccbbaa99887766554433221100".into(),
                msg_hex: "deadbeef".into(),
                g: None,
                t: Some(3),
                c: Some(4),
                digest_hex: "00112233445566778899aabbccddeeff".into(),
            },
        ];
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(!text.contains("\"t\":null"), "absent fields must be omitted");
        let back = read_records(buf.as_slice()).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn recomputes_what_the_hashes_produce() {
        let key = [0x42u8; 16];
        let msg = b"sixteen byte blk";
        let mut counters = OpCounters::new();
        let expect = brwhash(&key, msg, 4, &P1305, &mut counters).unwrap();
        let record = KatRecord {
            algo: "brwhash".into(),
            prime: 1305,
            key_hex: hex::encode(key),
            msg_hex: hex::encode(msg),
            g: None,
            t: Some(4),
            c: None,
            digest_hex: hex::encode(expect),
        };
        assert_eq!(
            compute_digest(&record, Backend::Scalar).unwrap(),
            record.digest_hex
        );
        assert_eq!(
            compute_digest(&record, Backend::Vec4).unwrap(),
            record.digest_hex,
            "brwhash records must fall back to the scalar path"
        );
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(matches!(
            compute_digest(
                &KatRecord {
                    algo: "md5".into(),
                    prime: 1305,
                    key_hex: String::new(),
                    msg_hex: String::new(),
                    g: None,
                    t: None,
                    c: None,
                    digest_hex: String::new(),
                },
                Backend::Scalar
            ),
            Err(KatError::UnknownAlgo(_))
        ));
        assert!(matches!(
            compute_digest(
                &KatRecord {
                    algo: "brwhash".into(),
                    prime: 1279,
                    key_hex: "00".repeat(16),
                    msg_hex: String::new(),
                    g: None,
                    t: None,
                    c: None,
                    digest_hex: String::new(),
                },
                Backend::Scalar
            ),
            Err(KatError::UnknownPrime(1279))
        ));
        let bad_line = read_records("{not json}\n".as_bytes());
        assert!(matches!(bad_line, Err(KatError::Json { line: 1, .. })));
    }
}
