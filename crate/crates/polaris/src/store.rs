//! Versioned binary corpus store.
//!
//! Layout (little-endian): magic `PLRS`, u32 version, then the ingest report as
//! a length-prefixed JSON blob, the period schedule, user names, thread ids and
//! submissions. Strings are u32 length + UTF-8 bytes. Derived indices are not
//! stored; they are rebuilt on load.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use polaris_core::corpus::{CorpusParts, IngestReport, Kind, Submission, ThreadId, UserId};
use polaris_core::{Corpus, PeriodSchedule, Stance};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"PLRS";
pub const VERSION: u32 = 1;

const HAS_PARENT_ID: u8 = 1;
const HAS_PARENT: u8 = 2;
const HAS_AUTHOR: u8 = 4;
const HAS_STANCE: u8 = 8;

struct Out<W: Write> {
    w: W,
}

impl<W: Write> Out<W> {
    fn bytes(&mut self, b: &[u8]) -> std::io::Result<()> {
        self.w.write_all(b)
    }
    fn u8(&mut self, v: u8) -> std::io::Result<()> {
        self.bytes(&[v])
    }
    fn u32(&mut self, v: u32) -> std::io::Result<()> {
        self.bytes(&v.to_le_bytes())
    }
    fn i64(&mut self, v: i64) -> std::io::Result<()> {
        self.bytes(&v.to_le_bytes())
    }
    fn len(&mut self, n: usize) -> std::io::Result<()> {
        let n = u32::try_from(n).map_err(|_| std::io::Error::other("length exceeds u32"))?;
        self.u32(n)
    }
    fn str(&mut self, s: &str) -> std::io::Result<()> {
        self.len(s.len())?;
        self.bytes(s.as_bytes())
    }
}

pub fn write_store(path: &Path, corpus: &Corpus) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io("store", path, e))?;
    let mut out = Out { w: BufWriter::new(file) };
    encode(&mut out, corpus).map_err(|e| Error::io("store", path, e))?;
    out.w.flush().map_err(|e| Error::io("store", path, e))
}

fn encode<W: Write>(out: &mut Out<W>, corpus: &Corpus) -> std::io::Result<()> {
    out.bytes(MAGIC)?;
    out.u32(VERSION)?;
    let report = serde_json::to_vec(corpus.report()).map_err(std::io::Error::other)?;
    out.len(report.len())?;
    out.bytes(&report)?;

    let periods = corpus.schedule().periods();
    out.len(periods.len())?;
    for p in periods {
        out.str(&p.name)?;
        out.i64(p.start_utc)?;
        out.i64(p.end_utc)?;
    }
    for names in [corpus.users(), corpus.threads()] {
        out.len(names.len())?;
        for n in names {
            out.str(n)?;
        }
    }
    out.len(corpus.len())?;
    for s in corpus.submissions() {
        out.str(&s.id)?;
        out.u8(match s.kind {
            Kind::Post => 0,
            Kind::Comment => 1,
        })?;
        out.u32(s.thread.0)?;
        let flags = (u8::from(s.parent_id.is_some()) * HAS_PARENT_ID)
            | (u8::from(s.parent.is_some()) * HAS_PARENT)
            | (u8::from(s.author.is_some()) * HAS_AUTHOR)
            | (u8::from(s.stance.is_some()) * HAS_STANCE);
        out.u8(flags)?;
        if let Some(p) = &s.parent_id {
            out.str(p)?;
        }
        if let Some(p) = s.parent {
            out.u32(p)?;
        }
        if let Some(a) = s.author {
            out.u32(a.0)?;
        }
        if let Some(st) = s.stance {
            out.u8(st.index() as u8)?;
        }
        out.i64(s.created_utc)?;
        out.str(&s.body)?;
    }
    Ok(())
}

struct In<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> In<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], String> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or("truncated file")?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8, String> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32, String> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
    fn i64(&mut self) -> Result<i64, String> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    fn len(&mut self) -> Result<usize, String> {
        let n = self.u32()? as usize;
        // every element takes at least one byte, so this bounds allocations
        if n > self.buf.len() - self.pos {
            return Err(format!("length {n} exceeds remaining data"));
        }
        Ok(n)
    }
    fn str(&mut self) -> Result<String, String> {
        let n = self.len()?;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|e| e.to_string())
    }
}

pub fn read_store(path: &Path) -> Result<Corpus> {
    let buf = std::fs::read(path).map_err(|e| Error::io("store", path, e))?;
    let parts = decode(&buf).map_err(|m| Error::format("store", path, m))?;
    Ok(Corpus::from_parts(parts)?)
}

fn decode(buf: &[u8]) -> Result<CorpusParts, String> {
    let mut r = In { buf, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err("not a corpus store (bad magic)".into());
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(format!("unsupported store version {version}, expected {VERSION}"));
    }
    let n = r.len()?;
    let report: IngestReport = serde_json::from_slice(r.take(n)?).map_err(|e| e.to_string())?;

    let n = r.len()?;
    let mut periods = Vec::with_capacity(n);
    for _ in 0..n {
        periods.push((r.str()?, r.i64()?, r.i64()?));
    }
    let schedule = PeriodSchedule::new(periods).map_err(|e| e.to_string())?;
    let mut names = [Vec::new(), Vec::new()];
    for list in &mut names {
        let n = r.len()?;
        list.reserve(n);
        for _ in 0..n {
            list.push(r.str()?);
        }
    }
    let [users, threads] = names;

    let n = r.len()?;
    let mut submissions = Vec::with_capacity(n);
    for _ in 0..n {
        let id = r.str()?;
        let kind = match r.u8()? {
            0 => Kind::Post,
            1 => Kind::Comment,
            k => return Err(format!("bad submission kind {k}")),
        };
        let thread = ThreadId(r.u32()?);
        let flags = r.u8()?;
        let parent_id = if flags & HAS_PARENT_ID != 0 { Some(r.str()?) } else { None };
        let parent = if flags & HAS_PARENT != 0 { Some(r.u32()?) } else { None };
        let author = if flags & HAS_AUTHOR != 0 { Some(UserId(r.u32()?)) } else { None };
        let stance = if flags & HAS_STANCE != 0 {
            Some(*Stance::ALL.get(r.u8()? as usize).ok_or("bad stance code")?)
        } else {
            None
        };
        let created_utc = r.i64()?;
        let body = r.str()?;
        submissions.push(Submission { id, kind, thread, parent_id, parent, author, created_utc, body, stance });
    }
    if r.pos != buf.len() {
        return Err("trailing bytes after submissions".into());
    }
    Ok(CorpusParts { submissions, users, threads, schedule, report })
}
