//! Binary tensor file format "TNS3".
//!
//! Layout: 4 magic bytes `TNS3`, one version byte (0x01), three unsigned
//! 64-bit little-endian dimensions (n1, n2, n3), then `n1*n2*n3` IEEE-754
//! binary64 little-endian values in tube-major order (k fastest, then j,
//! then i). Round trips are bit-exact.

use super::{DenseTensor, Shape3};
use crate::error::{Error, Result};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: [u8; 4] = *b"TNS3";
const VERSION: u8 = 0x01;

pub fn write_tensor(t: &DenseTensor, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_tensor_to(t, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_tensor_to(t: &DenseTensor, w: &mut impl Write) -> Result<()> {
    w.write_all(&MAGIC)?;
    w.write_all(&[VERSION])?;
    for dim in [t.shape().n1(), t.shape().n2(), t.shape().n3()] {
        w.write_all(&(dim as u64).to_le_bytes())?;
    }
    for &x in t.data() {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<DenseTensor> {
    read_tensor_from(&mut BufReader::new(File::open(path)?))
}

pub fn read_tensor_from(r: &mut impl Read) -> Result<DenseTensor> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(|_| Error::BadMagic)?;
    if magic != MAGIC {
        return Err(Error::BadMagic);
    }
    let mut version = [0u8; 1];
    r.read_exact(&mut version)
        .map_err(|_| Error::BadVersion(0))?;
    if version[0] != VERSION {
        return Err(Error::BadVersion(version[0]));
    }
    let mut dims = [0usize; 3];
    for d in &mut dims {
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf)
            .map_err(|_| Error::DimensionOverflow)?;
        let v = u64::from_le_bytes(buf);
        *d = usize::try_from(v).map_err(|_| Error::DimensionOverflow)?;
    }
    let shape = Shape3::new(dims[0], dims[1], dims[2]).map_err(|_| Error::DimensionOverflow)?;
    let expected = shape.numel();
    let mut data = Vec::with_capacity(expected);
    let mut buf = [0u8; 8];
    for _ in 0..expected {
        if let Err(e) = r.read_exact(&mut buf) {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                return Err(Error::TruncatedPayload {
                    expected,
                    got: data.len(),
                });
            }
            return Err(Error::Io(e));
        }
        data.push(f64::from_le_bytes(buf));
    }
    DenseTensor::from_vec(shape, data)
}
