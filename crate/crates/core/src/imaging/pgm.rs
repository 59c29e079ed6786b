//! Binary PGM (P5, maxval 255) reading and writing.
//!
//! The writer emits a canonical header (`P5\n<w> <h>\n255\n`) followed by
//! the raw pixel bytes; the reader accepts any standards-conforming P5
//! header, including `#` comment lines. Reading back a written file
//! reproduces the image bit-exactly.

use super::{GrayImage, ImageError};
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("not a binary PGM (P5) file")]
    BadMagic,
    #[error("malformed PGM header: {0}")]
    BadHeader(String),
    #[error("unsupported maxval {0} (only 255 is supported)")]
    BadMaxval(u32),
    #[error("truncated pixel data: expected {expected} bytes, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Reads one whitespace/comment-delimited header token.
fn read_token(r: &mut impl Read) -> Result<String, PgmError> {
    let mut tok = String::new();
    let mut byte = [0u8; 1];
    let mut in_comment = false;
    loop {
        if r.read(&mut byte)? == 0 {
            if tok.is_empty() {
                return Err(PgmError::BadHeader("unexpected end of header".into()));
            }
            return Ok(tok);
        }
        let c = byte[0];
        if in_comment {
            if c == b'\n' {
                in_comment = false;
            }
            continue;
        }
        match c {
            b'#' => in_comment = true,
            b' ' | b'\t' | b'\r' | b'\n' => {
                if !tok.is_empty() {
                    return Ok(tok);
                }
            }
            _ => tok.push(c as char),
        }
    }
}

fn parse_dim(tok: &str) -> Result<u32, PgmError> {
    tok.parse::<u32>()
        .map_err(|_| PgmError::BadHeader(format!("expected integer, got {tok:?}")))
}

pub fn read(r: &mut impl Read) -> Result<GrayImage, PgmError> {
    let mut magic = [0u8; 2];
    r.read_exact(&mut magic)?;
    if &magic != b"P5" {
        return Err(PgmError::BadMagic);
    }
    let width = parse_dim(&read_token(r)?)?;
    let height = parse_dim(&read_token(r)?)?;
    let maxval = parse_dim(&read_token(r)?)?;
    if maxval != 255 {
        return Err(PgmError::BadMaxval(maxval));
    }
    let expected = width as usize * height as usize;
    let mut pixels = vec![0u8; expected];
    let mut got = 0;
    while got < expected {
        let n = r.read(&mut pixels[got..])?;
        if n == 0 {
            return Err(PgmError::Truncated { expected, got });
        }
        got += n;
    }
    Ok(GrayImage::new(width, height, pixels)?)
}

pub fn write(img: &GrayImage, w: &mut impl Write) -> Result<(), PgmError> {
    write!(w, "P5\n{} {}\n255\n", img.width(), img.height())?;
    w.write_all(img.pixels())?;
    Ok(())
}

pub fn read_file(path: impl AsRef<Path>) -> Result<GrayImage, PgmError> {
    let mut r = BufReader::new(File::open(path)?);
    read(&mut r)
}

pub fn write_file(img: &GrayImage, path: impl AsRef<Path>) -> Result<(), PgmError> {
    let mut w = BufWriter::new(File::create(path)?);
    write(img, &mut w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let w = rng.gen_range(1..50);
            let h = rng.gen_range(1..50);
            let pixels: Vec<u8> = (0..w as usize * h as usize).map(|_| rng.gen()).collect();
            let img = GrayImage::new(w, h, pixels).unwrap();
            let mut buf = Vec::new();
            write(&img, &mut buf).unwrap();
            let back = read(&mut buf.as_slice()).unwrap();
            assert_eq!(back, img);
            // canonical writer output is byte-stable
            let mut buf2 = Vec::new();
            write(&back, &mut buf2).unwrap();
            assert_eq!(buf, buf2);
        }
    }

    #[test]
    fn reads_headers_with_comments() {
        let mut data = b"P5\n# a comment\n 3 \t2\n# another\n255\n".to_vec();
        data.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
        let img = read(&mut data.as_slice()).unwrap();
        assert_eq!((img.width(), img.height()), (3, 2));
        assert_eq!(img.pixels(), &[1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn rejects_bad_magic_and_maxval() {
        assert!(matches!(read(&mut &b"P6\n1 1\n255\n\x00"[..]), Err(PgmError::BadMagic)));
        assert!(matches!(
            read(&mut &b"P5\n1 1\n65535\n\x00\x00"[..]),
            Err(PgmError::BadMaxval(65535))
        ));
    }

    #[test]
    fn rejects_truncated_pixels() {
        let data = b"P5\n4 4\n255\n\x01\x02".to_vec();
        assert!(matches!(read(&mut data.as_slice()), Err(PgmError::Truncated { .. })));
    }
}
