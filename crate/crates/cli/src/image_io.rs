//! Netpbm grayscale (`P2`/`P5`) and colour (`P3`/`P6`) images with maxval 255.

use std::fs;
use std::path::Path;

use geqie::model::ImageArray;
use geqie::{GeqieError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Encoding {
    Ascii,
    Binary,
}

fn parse_err(msg: impl Into<String>) -> GeqieError {
    GeqieError::Parse(format!("netpbm: {}", msg.into()))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&[u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_err("truncated header or data"));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self) -> Result<usize> {
        let tok = self.token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                parse_err(format!(
                    "expected a number, found `{}`",
                    String::from_utf8_lossy(tok)
                ))
            })
    }
}

pub fn decode(bytes: &[u8]) -> Result<ImageArray> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.token()?.to_vec();
    let (channels, encoding) = match magic.as_slice() {
        b"P2" => (1, Encoding::Ascii),
        b"P5" => (1, Encoding::Binary),
        b"P3" => (3, Encoding::Ascii),
        b"P6" => (3, Encoding::Binary),
        other => {
            return Err(parse_err(format!(
                "unsupported magic `{}`",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let width = cur.number()?;
    let height = cur.number()?;
    let maxval = cur.number()?;
    if maxval != 255 {
        return Err(parse_err(format!(
            "maxval {maxval} unsupported, expected 255"
        )));
    }
    if width == 0 || height == 0 {
        return Err(parse_err("zero image extent"));
    }
    let len = width * height * channels;
    let samples = match encoding {
        Encoding::Binary => {
            // exactly one whitespace byte separates the header from the raster
            let start = cur.pos + 1;
            let raster = bytes
                .get(start..start + len)
                .ok_or_else(|| parse_err(format!("raster truncated: expected {len} bytes")))?;
            raster.to_vec()
        }
        Encoding::Ascii => (0..len)
            .map(|_| {
                let v = cur.number()?;
                u8::try_from(v).map_err(|_| parse_err(format!("sample {v} exceeds 255")))
            })
            .collect::<Result<_>>()?,
    };
    ImageArray::from_u8(vec![height, width], channels, &samples)
}

pub fn encode(image: &ImageArray, encoding: Encoding) -> Result<Vec<u8>> {
    let [height, width] = image.dims() else {
        return Err(GeqieError::Shape(format!(
            "netpbm needs a 2-axis image, got {:?}",
            image.dims()
        )));
    };
    let magic = match (image.channels(), encoding) {
        (1, Encoding::Ascii) => "P2",
        (1, Encoding::Binary) => "P5",
        (3, Encoding::Ascii) => "P3",
        (3, Encoding::Binary) => "P6",
        (c, _) => {
            return Err(GeqieError::Shape(format!(
                "netpbm cannot hold {c} channels"
            )))
        }
    };
    let mut out = format!("{magic}\n{width} {height}\n255\n").into_bytes();
    let samples = image.to_u8();
    match encoding {
        Encoding::Binary => out.extend_from_slice(&samples),
        Encoding::Ascii => {
            for row in samples.chunks(width * image.channels()) {
                let line: Vec<String> = row.iter().map(u8::to_string).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
    }
    Ok(out)
}

pub fn read(path: &Path) -> Result<ImageArray> {
    decode(&fs::read(path)?)
}

pub fn write(path: &Path, image: &ImageArray, encoding: Encoding) -> Result<()> {
    fs::write(path, encode(image, encoding)?)?;
    Ok(())
}
