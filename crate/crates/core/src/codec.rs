//! Little-endian primitives shared by the binary artifact formats.
//!
//! Strings are a `u32` byte length followed by UTF-8 bytes. Sequences are a
//! `u32` element count followed by the elements. Floats are IEEE-754 binary64.

use std::io::{self, Read, Write};

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

pub(crate) struct Writer<W> {
    inner: W,
}

impl<W: Write> Writer<W> {
    pub fn new(inner: W) -> Self {
        Self { inner }
    }

    pub fn into_inner(self) -> W {
        self.inner
    }

    pub fn bytes(&mut self, b: &[u8]) -> io::Result<()> {
        self.inner.write_all(b)
    }

    pub fn u32(&mut self, v: u32) -> io::Result<()> {
        self.inner.write_u32::<LE>(v)
    }

    pub fn u64(&mut self, v: u64) -> io::Result<()> {
        self.inner.write_u64::<LE>(v)
    }

    pub fn f64(&mut self, v: f64) -> io::Result<()> {
        self.inner.write_f64::<LE>(v)
    }

    pub fn len(&mut self, n: usize) -> io::Result<()> {
        let n = u32::try_from(n).map_err(|_| io::Error::other("sequence longer than u32::MAX"))?;
        self.u32(n)
    }

    pub fn str(&mut self, s: &str) -> io::Result<()> {
        self.len(s.len())?;
        self.bytes(s.as_bytes())
    }

    pub fn f64s(&mut self, vs: &[f64]) -> io::Result<()> {
        for &v in vs {
            self.f64(v)?;
        }
        Ok(())
    }

    pub fn u32s(&mut self, vs: &[u32]) -> io::Result<()> {
        self.len(vs.len())?;
        for &v in vs {
            self.u32(v)?;
        }
        Ok(())
    }
}

pub(crate) struct Reader<R> {
    inner: R,
}

impl<R: Read> Reader<R> {
    pub fn new(inner: R) -> Self {
        Self { inner }
    }

    pub fn bytes<const N: usize>(&mut self) -> io::Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner.read_exact(&mut buf)?;
        Ok(buf)
    }

    pub fn u32(&mut self) -> io::Result<u32> {
        self.inner.read_u32::<LE>()
    }

    pub fn u64(&mut self) -> io::Result<u64> {
        self.inner.read_u64::<LE>()
    }

    pub fn f64(&mut self) -> io::Result<f64> {
        self.inner.read_f64::<LE>()
    }

    pub fn len(&mut self) -> io::Result<usize> {
        Ok(self.u32()? as usize)
    }

    pub fn str(&mut self) -> io::Result<String> {
        let n = self.len()?;
        let mut buf = Vec::with_capacity(n.min(1 << 20));
        (&mut self.inner).take(n as u64).read_to_end(&mut buf)?;
        if buf.len() != n {
            return Err(io::ErrorKind::UnexpectedEof.into());
        }
        String::from_utf8(buf).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }

    pub fn f64s(&mut self, n: usize) -> io::Result<Vec<f64>> {
        (0..n).map(|_| self.f64()).collect()
    }

    pub fn u32s(&mut self) -> io::Result<Vec<u32>> {
        let n = self.len()?;
        (0..n).map(|_| self.u32()).collect()
    }

    /// Fails unless the underlying reader is exhausted.
    pub fn finish(mut self) -> io::Result<()> {
        let mut probe = [0u8; 1];
        match self.inner.read(&mut probe)? {
            0 => Ok(()),
            _ => Err(io::Error::new(io::ErrorKind::InvalidData, "trailing bytes")),
        }
    }
}
