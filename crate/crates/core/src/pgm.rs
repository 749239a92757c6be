//! Binary PGM (P5, maxval 255) reading and writing.
//!
//! The writer emits a canonical header (`P5\n<width> <height>\n255\n`) so
//! that identical images always serialize to identical bytes.

use crate::error::{Error, Result};
use crate::image::GrayImage;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            // '#' starts a comment running to end of line
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn read_number(&mut self, what: &str) -> Result<u64> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::PgmMalformedHeader {
                offset: start,
                detail: format!("expected {what}"),
            });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| Error::PgmMalformedHeader {
            offset: start,
            detail: format!("{what} out of range"),
        })
    }
}

/// Parses a binary PGM stream into a [`GrayImage`], byte-exact.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[0..2] != b"P5" {
        return Err(Error::PgmMalformedHeader {
            offset: 0,
            detail: "missing P5 magic".into(),
        });
    }
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.read_number("width")?;
    let height = cur.read_number("height")?;
    let maxval_offset = {
        cur.skip_whitespace_and_comments();
        cur.pos
    };
    let maxval = cur.read_number("maxval")?;
    if maxval != 255 {
        return Err(Error::PgmUnsupportedMaxval {
            offset: maxval_offset,
            maxval,
        });
    }
    if width == 0 || height == 0 {
        return Err(Error::PgmMalformedHeader {
            offset: 2,
            detail: format!("zero dimension {width}x{height}"),
        });
    }
    // exactly one whitespace byte separates the header from the payload
    if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
        return Err(Error::PgmMalformedHeader {
            offset: cur.pos,
            detail: "expected single whitespace before payload".into(),
        });
    }
    cur.pos += 1;
    let expected = (width * height) as usize;
    let found = bytes.len() - cur.pos;
    if found < expected {
        return Err(Error::PgmTruncatedPayload {
            offset: cur.pos,
            expected,
            found,
        });
    }
    let pixels = bytes[cur.pos..cur.pos + expected].to_vec();
    GrayImage::new(width as usize, height as usize, pixels)
}

/// Serializes a [`GrayImage`] as binary PGM. Total on valid input.
pub fn write_pgm(image: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", image.width(), image.height());
    let mut out = Vec::with_capacity(header.len() + image.pixels().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(image.pixels());
    out
}
