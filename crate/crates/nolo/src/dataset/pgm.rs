//! Binary PGM (P5) frame storage: dependency-free and bit-exact at 8 bits.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::DatasetError;
use crate::simworld::Frame;

pub fn write_pgm(frame: &Frame, path: &Path) -> Result<(), DatasetError> {
    let mut buf = Vec::with_capacity(frame.width * frame.height + 32);
    write!(buf, "P5\n{} {}\n255\n", frame.width, frame.height)
        .expect("in-memory write cannot fail");
    buf.extend_from_slice(&frame.to_u8());
    write_atomic(path, &buf)
}

pub fn read_pgm(path: &Path) -> Result<Frame, DatasetError> {
    let data = fs::read(path).map_err(|e| DatasetError::io(path, e))?;
    let bad = |msg: &str| DatasetError::Format {
        path: path.to_path_buf(),
        msg: msg.to_string(),
    };
    // Header: magic, width, height, maxval, single whitespace, then payload.
    let mut fields = Vec::new();
    let mut pos = 0usize;
    while fields.len() < 4 && pos < data.len() {
        while pos < data.len() && data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < data.len() && !data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            break;
        }
        fields.push(std::str::from_utf8(&data[start..pos]).map_err(|_| bad("non-ascii header"))?);
    }
    if fields.len() != 4 || fields[0] != "P5" {
        return Err(bad("not a binary PGM (P5) file"));
    }
    let width: usize = fields[1].parse().map_err(|_| bad("bad width"))?;
    let height: usize = fields[2].parse().map_err(|_| bad("bad height"))?;
    if fields[3] != "255" {
        return Err(bad("expected maxval 255"));
    }
    pos += 1; // single whitespace after maxval
    let payload = data.get(pos..pos + width * height).ok_or_else(|| bad(
        "payload shorter than width*height",
    ))?;
    Ok(Frame::from_u8(width, height, payload))
}

/// Write via temp-file-then-rename so readers never observe partial files.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), DatasetError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| DatasetError::io(dir, e))?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| DatasetError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| DatasetError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simworld::Frame;

    #[test]
    fn pgm_roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let mut frame = Frame::new(17, 9);
        for (i, p) in frame.pixels.iter_mut().enumerate() {
            *p = (i % 256) as f64 / 255.0;
        }
        frame.quantize_u8();
        let path = dir.path().join("f.pgm");
        write_pgm(&frame, &path).unwrap();
        let back = read_pgm(&path).unwrap();
        assert_eq!(frame, back);
    }

    #[test]
    fn truncated_pgm_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.pgm");
        std::fs::write(&path, b"P5\n8 8\n255\nshort").unwrap();
        assert!(read_pgm(&path).is_err());
    }
}
