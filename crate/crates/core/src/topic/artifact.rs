//! Binary model artifact. Layout documented in `docs/formats.md`.

use std::fs;
use std::io::{self, Cursor};
use std::path::Path;

use super::TopicModel;
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};

pub const MODEL_MAGIC: [u8; 8] = *b"THMMODL\0";
pub const MODEL_VERSION: u32 = 1;

impl TopicModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.encode().expect("writing to a Vec cannot fail")
    }

    fn encode(&self) -> io::Result<Vec<u8>> {
        let mut w = Writer::new(Vec::new());
        w.bytes(&MODEL_MAGIC)?;
        w.u32(MODEL_VERSION)?;
        w.len(self.topics)?;
        w.len(self.vocab_size())?;
        w.len(self.chunk_count)?;
        w.len(self.num_docs())?;
        w.f64(self.alpha)?;
        w.f64(self.beta)?;
        w.u64(self.seed)?;
        w.len(self.iterations)?;
        w.str(&self.vocab_hash)?;
        w.str(&self.bundle_hash)?;
        for t in &self.terms {
            w.str(t)?;
        }
        for d in &self.doc_ids {
            w.str(d)?;
        }
        for &n in &self.chunk_lengths {
            w.u32(n)?;
        }
        w.f64s(&self.phi)?;
        w.f64s(&self.theta)?;
        w.u32s(&self.assignments)?;
        w.len(self.log_likelihood.len())?;
        w.f64s(&self.log_likelihood)?;
        Ok(w.into_inner())
    }

    pub fn from_bytes(bytes: &[u8]) -> io::Result<Self> {
        let mut r = Reader::new(Cursor::new(bytes));
        if r.bytes::<8>()? != MODEL_MAGIC {
            return Err(invalid("not a model artifact (bad magic)".into()));
        }
        let version = r.u32()?;
        if version != MODEL_VERSION {
            return Err(invalid(format!("unsupported model version {version}")));
        }
        let topics = r.len()?;
        let vocab_size = r.len()?;
        let chunk_count = r.len()?;
        let num_docs = r.len()?;
        let alpha = r.f64()?;
        let beta = r.f64()?;
        let seed = r.u64()?;
        let iterations = r.len()?;
        let vocab_hash = r.str()?;
        let bundle_hash = r.str()?;
        let terms = (0..vocab_size).map(|_| r.str()).collect::<io::Result<Vec<_>>>()?;
        let doc_ids = (0..num_docs).map(|_| r.str()).collect::<io::Result<Vec<_>>>()?;
        let n_chunks = num_docs * chunk_count;
        let chunk_lengths = (0..n_chunks).map(|_| r.u32()).collect::<io::Result<Vec<_>>>()?;
        let phi = r.f64s(topics * vocab_size)?;
        let theta = r.f64s(n_chunks * topics)?;
        let assignments = r.u32s()?;
        let n_trace = r.len()?;
        let log_likelihood = r.f64s(n_trace)?;
        r.finish()?;
        let model = TopicModel {
            topics,
            alpha,
            beta,
            seed,
            iterations,
            vocab_hash,
            bundle_hash,
            terms,
            chunk_count,
            doc_ids,
            chunk_lengths,
            phi,
            theta,
            assignments,
            log_likelihood,
        };
        model.validate().map_err(|e| invalid(e.to_string()))?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<String> {
        let bytes = self.to_bytes();
        fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;
        Ok(crate::content_hash(&bytes))
    }

    /// Loads a model, returning it with the file's content hash.
    pub fn load(path: &Path) -> Result<(Self, String)> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let model = Self::from_bytes(&bytes).map_err(|e| Error::malformed(path, e.to_string()))?;
        Ok((model, crate::content_hash(&bytes)))
    }
}

fn invalid(msg: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}
