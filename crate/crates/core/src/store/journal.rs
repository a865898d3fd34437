//! Append-only, checksummed journal file.
//!
//! Layout: a magic header line, then one entry per line as
//! `<crc32 as 8 hex digits> <json>\n`. An entry is acknowledged once its
//! line has been written and `fdatasync`ed. On open, a torn or unverifiable
//! final line is cut off; a bad line followed by more data is corruption.

use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::StoreError;

pub const MAGIC: &[u8] = b"MATHWORLD-JOURNAL v1\n";

#[derive(Debug)]
pub struct Journal {
    file: File,
    path: PathBuf,
    len: u64,
}

fn encode_line<T: Serialize>(entry: &T) -> Result<Vec<u8>, StoreError> {
    let json = serde_json::to_vec(entry).map_err(|e| StoreError::Encode(e.to_string()))?;
    let crc = crc32fast::hash(&json);
    let mut line = format!("{crc:08x} ").into_bytes();
    line.extend_from_slice(&json);
    line.push(b'\n');
    Ok(line)
}

fn decode_line<T: DeserializeOwned>(line: &[u8]) -> Option<T> {
    if line.len() < 9 || line[8] != b' ' {
        return None;
    }
    let crc = u32::from_str_radix(std::str::from_utf8(&line[..8]).ok()?, 16).ok()?;
    let json = &line[9..];
    if crc32fast::hash(json) != crc {
        return None;
    }
    serde_json::from_slice(json).ok()
}

pub(crate) fn sync_dir(dir: &Path) {
    // Best effort: not every platform lets a directory be opened for sync.
    if let Ok(d) = File::open(dir) {
        let _ = d.sync_all();
    }
}

impl Journal {
    /// Opens or creates the journal at `path` and replays its entries.
    pub fn open<T: DeserializeOwned>(path: &Path) -> Result<(Journal, Vec<T>), StoreError> {
        let io = |e| StoreError::io(path, e);
        let existed = path.exists();
        let mut file = OpenOptions::new().read(true).write(true).create(true).truncate(false).open(path).map_err(io)?;
        if !existed {
            if let Some(dir) = path.parent() {
                sync_dir(dir);
            }
        }
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes).map_err(io)?;

        // A crash while writing the header leaves a prefix of it.
        if bytes.len() < MAGIC.len() && MAGIC.starts_with(&bytes) {
            file.set_len(0).map_err(io)?;
            file.seek(SeekFrom::Start(0)).map_err(io)?;
            file.write_all(MAGIC).map_err(io)?;
            file.sync_all().map_err(io)?;
            return Ok((Journal { file, path: path.to_path_buf(), len: MAGIC.len() as u64 }, Vec::new()));
        }
        if !bytes.starts_with(MAGIC) {
            return Err(StoreError::Corrupt { path: path.to_path_buf(), msg: "missing journal header".into() });
        }

        let mut entries = Vec::new();
        let mut pos = MAGIC.len();
        let mut valid_end = pos;
        while pos < bytes.len() {
            let Some(nl) = bytes[pos..].iter().position(|&b| b == b'\n') else {
                break; // torn tail without newline
            };
            let line = &bytes[pos..pos + nl];
            let next = pos + nl + 1;
            match decode_line(line) {
                Some(entry) => {
                    entries.push(entry);
                    valid_end = next;
                }
                None if next < bytes.len() => {
                    return Err(StoreError::Corrupt {
                        path: path.to_path_buf(),
                        msg: format!("unreadable entry at byte {pos}"),
                    });
                }
                None => break,
            }
            pos = next;
        }

        if valid_end < bytes.len() {
            file.set_len(valid_end as u64).map_err(io)?;
            file.sync_all().map_err(io)?;
        }
        file.seek(SeekFrom::Start(valid_end as u64)).map_err(io)?;
        Ok((Journal { file, path: path.to_path_buf(), len: valid_end as u64 }, entries))
    }

    /// Appends and syncs one entry. Returns only after the entry is durable.
    pub fn append<T: Serialize>(&mut self, entry: &T) -> Result<(), StoreError> {
        let line = encode_line(entry)?;
        let result = self
            .file
            .write_all(&line)
            .and_then(|_| self.file.sync_data());
        if let Err(e) = result {
            // Leave no half-written entry behind for the next append.
            let _ = self.file.set_len(self.len);
            let _ = self.file.seek(SeekFrom::Start(self.len));
            return Err(StoreError::io(&self.path, e));
        }
        self.len += line.len() as u64;
        Ok(())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len <= MAGIC.len() as u64
    }
}
