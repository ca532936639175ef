//! PGM (P5 binary, P2 ASCII) codec.
//!
//! The writer always emits canonical P5 with maxval 255 and no comments.

use thiserror::Error;

use crate::raster::GrayRaster;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PgmError {
    #[error("unsupported magic {0:?} (expected P5 or P2)")]
    UnsupportedMagic(String),
    #[error("header ended before {0}")]
    TruncatedHeader(&'static str),
    #[error("invalid {field} in header: {token:?}")]
    InvalidHeader { field: &'static str, token: String },
    #[error("maxval {0} exceeds 255")]
    MaxvalTooLarge(u32),
    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    TruncatedPixels { expected: usize, found: usize },
    #[error("sample {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u32 },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Encoding {
    Binary,
    Ascii,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self, field: &'static str) -> Result<u32, PgmError> {
        let tok = self.token().ok_or(PgmError::TruncatedHeader(field))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| PgmError::InvalidHeader {
                field,
                token: String::from_utf8_lossy(tok).into_owned(),
            })
    }
}

pub fn read_pgm(bytes: &[u8]) -> Result<GrayRaster, PgmError> {
    let encoding = match bytes.get(..2) {
        Some(b"P5") => Encoding::Binary,
        Some(b"P2") => Encoding::Ascii,
        Some(other) => {
            return Err(PgmError::UnsupportedMagic(
                String::from_utf8_lossy(other).into_owned(),
            ))
        }
        None => return Err(PgmError::TruncatedHeader("magic")),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if maxval > 255 {
        return Err(PgmError::MaxvalTooLarge(maxval));
    }
    if maxval == 0 {
        return Err(PgmError::InvalidHeader {
            field: "maxval",
            token: "0".into(),
        });
    }
    let expected = width * height;
    let scale = |v: u32| -> Result<u8, PgmError> {
        if v > maxval {
            return Err(PgmError::SampleOutOfRange { value: v, maxval });
        }
        Ok(((v * 255 + maxval / 2) / maxval) as u8)
    };

    let samples = match encoding {
        Encoding::Binary => {
            // exactly one whitespace byte separates maxval from the raster
            match bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => return Err(PgmError::TruncatedHeader("pixel data")),
            }
            let data = &bytes[cur.pos..];
            if data.len() < expected {
                return Err(PgmError::TruncatedPixels {
                    expected,
                    found: data.len(),
                });
            }
            data[..expected]
                .iter()
                .map(|&v| scale(u32::from(v)))
                .collect::<Result<Vec<_>, _>>()?
        }
        Encoding::Ascii => {
            let mut out = Vec::with_capacity(expected);
            while out.len() < expected {
                match cur.token() {
                    Some(tok) => {
                        let v = std::str::from_utf8(tok)
                            .ok()
                            .and_then(|s| s.parse::<u32>().ok())
                            .ok_or_else(|| PgmError::InvalidHeader {
                                field: "sample",
                                token: String::from_utf8_lossy(tok).into_owned(),
                            })?;
                        out.push(scale(v)?);
                    }
                    None => {
                        return Err(PgmError::TruncatedPixels {
                            expected,
                            found: out.len(),
                        })
                    }
                }
            }
            out
        }
    };
    Ok(GrayRaster::new(width, height, samples).expect("sample count checked above"))
}

pub fn write_pgm(gray: &GrayRaster) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", gray.width(), gray.height()).into_bytes();
    out.extend_from_slice(gray.cells());
    out
}
