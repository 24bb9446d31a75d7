//! Binary index format.
//!
//! ```text
//! "WGNE" | version 0x01 | flags (bit 0: sentinel mode)
//! 8 sections, each: u64 LE payload length | payload
//!   summary, finals, b_max, b_min, dictionary, postings, length tables, colex table
//! u64 LE checksum over every preceding byte
//! ```
//!
//! The summary holds a width byte `w` (1, 2 or 4) followed by six u32 values
//! (states, edges, total label length, alphabet size, r, epsilon edges). Every
//! other integer is a `w`-byte little-endian unsigned value. Bit arrays are
//! packed LSB-first. The two tables are stored as row counts only; their rows
//! are rebuilt from the postings and checked against those counts.
//!
//! The checksum is a Fletcher-style pair of 32-bit running sums: `a` is the
//! byte sum, `b` the sum of the successive values of `a`, both modulo 2^32,
//! stored as `(b << 32) | a`.

use std::cmp::Ordering;

use thiserror::Error;

use super::{edge_tables, LabelDictionary, LabelPostings, WheelerIndex};
use crate::bits::RankSelectBits;
use crate::gnfa::{colex_compare, AutomatonSummary};

const MAGIC: &[u8; 4] = b"WGNE";
const VERSION: u8 = 0x01;
const SECTIONS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0}")]
    Version(u8),
    #[error("truncated index: {0}")]
    Truncated(&'static str),
    #[error("checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    Checksum { stored: u64, computed: u64 },
    #[error("inconsistent index: {0}")]
    Inconsistent(&'static str),
}

pub fn checksum(bytes: &[u8]) -> u64 {
    let (mut a, mut b) = (0u32, 0u32);
    for &x in bytes {
        a = a.wrapping_add(x as u32);
        b = b.wrapping_add(a);
    }
    ((b as u64) << 32) | a as u64
}

fn width_for(max: usize) -> u8 {
    if max <= u8::MAX as usize {
        1
    } else if max <= u16::MAX as usize {
        2
    } else {
        4
    }
}

struct Writer {
    width: u8,
    buf: Vec<u8>,
}

impl Writer {
    fn int(&mut self, v: usize) {
        self.buf
            .extend_from_slice(&(v as u32).to_le_bytes()[..self.width as usize]);
    }

    fn bits(&mut self, b: &RankSelectBits) {
        let nbytes = b.len().div_ceil(8);
        let bytes = b.words().iter().flat_map(|w| w.to_le_bytes());
        self.buf.extend(bytes.take(nbytes));
    }
}

impl WheelerIndex {
    pub fn serialize(&self) -> Vec<u8> {
        let s = &self.summary;
        let width = width_for(s.states.max(s.edges).max(s.label_length));
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.sentinel_mode as u8);

        let mut sections: Vec<Vec<u8>> = Vec::with_capacity(SECTIONS);
        let mut w = Writer {
            width,
            buf: vec![width],
        };
        for v in [
            s.states,
            s.edges,
            s.label_length,
            s.alphabet,
            s.r,
            s.epsilon_edges,
        ] {
            w.buf.extend_from_slice(&(v as u32).to_le_bytes());
        }
        sections.push(std::mem::take(&mut w.buf));

        for b in [&self.finals, &self.b_max, &self.b_min] {
            w.bits(b);
            sections.push(std::mem::take(&mut w.buf));
        }

        w.int(self.dictionary.len());
        for label in self.dictionary.iter() {
            w.int(label.len());
            w.buf.extend_from_slice(label);
        }
        sections.push(std::mem::take(&mut w.buf));

        for id in 0..self.dictionary.len() {
            w.int(self.postings.multiplicity(id));
            for &x in self
                .postings
                .sources(id)
                .iter()
                .chain(self.postings.targets(id))
            {
                w.int(x as usize);
            }
        }
        sections.push(std::mem::take(&mut w.buf));

        w.int(self.length_tables.r());
        for c in &self.length_tables.classes {
            w.int(c.rows().len());
        }
        sections.push(std::mem::take(&mut w.buf));

        w.int(self.colex_table.rows().len());
        sections.push(std::mem::take(&mut w.buf));

        for sec in &sections {
            out.extend_from_slice(&(sec.len() as u64).to_le_bytes());
            out.extend_from_slice(sec);
        }
        let sum = checksum(&out);
        out.extend_from_slice(&sum.to_le_bytes());
        out
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Self, FormatError> {
        if bytes.len() < 4 || &bytes[..4] != MAGIC {
            return Err(FormatError::BadMagic);
        }
        let version = *bytes.get(4).ok_or(FormatError::Truncated("header"))?;
        if version != VERSION {
            return Err(FormatError::Version(version));
        }
        let flags = *bytes.get(5).ok_or(FormatError::Truncated("header"))?;
        if flags & !1 != 0 {
            return Err(FormatError::Inconsistent("unknown flag bits"));
        }

        let mut pos = 6;
        let mut sections = Vec::with_capacity(SECTIONS);
        for _ in 0..SECTIONS {
            let len_bytes = bytes
                .get(pos..pos + 8)
                .ok_or(FormatError::Truncated("section length"))?;
            let len = u64::from_le_bytes(len_bytes.try_into().unwrap());
            pos += 8;
            let end = usize::try_from(len)
                .ok()
                .and_then(|l| pos.checked_add(l))
                .filter(|&e| e <= bytes.len())
                .ok_or(FormatError::Truncated("section payload"))?;
            sections.push(&bytes[pos..end]);
            pos = end;
        }
        let stored = bytes
            .get(pos..pos + 8)
            .ok_or(FormatError::Truncated("checksum"))?;
        if pos + 8 != bytes.len() {
            return Err(FormatError::Inconsistent("trailing bytes after checksum"));
        }
        let stored = u64::from_le_bytes(stored.try_into().unwrap());
        let computed = checksum(&bytes[..pos]);
        if stored != computed {
            return Err(FormatError::Checksum { stored, computed });
        }

        let summary_sec = sections[0];
        if summary_sec.len() != 25 {
            return Err(FormatError::Inconsistent("summary size"));
        }
        let width = summary_sec[0];
        if ![1, 2, 4].contains(&width) {
            return Err(FormatError::Inconsistent("integer width"));
        }
        let field = |i: usize| {
            u32::from_le_bytes(summary_sec[1 + 4 * i..5 + 4 * i].try_into().unwrap()) as usize
        };
        let summary = AutomatonSummary {
            states: field(0),
            edges: field(1),
            label_length: field(2),
            alphabet: field(3),
            r: field(4),
            epsilon_edges: field(5),
        };
        let n = summary.states;
        if n == 0 {
            return Err(FormatError::Inconsistent("zero states"));
        }

        let bits = |sec: &[u8]| -> Result<RankSelectBits, FormatError> {
            if sec.len() != n.div_ceil(8) {
                return Err(FormatError::Inconsistent("bit array size"));
            }
            let words = sec
                .chunks(8)
                .map(|c| {
                    let mut w = [0u8; 8];
                    w[..c.len()].copy_from_slice(c);
                    u64::from_le_bytes(w)
                })
                .collect();
            Ok(RankSelectBits::from_words(n, words))
        };
        let finals = bits(sections[1])?;
        let b_max = bits(sections[2])?;
        let b_min = bits(sections[3])?;

        let mut rd = Reader {
            width,
            buf: sections[4],
        };
        let count = rd.int()?;
        let mut labels = Vec::with_capacity(count.min(rd.buf.len()));
        for _ in 0..count {
            let len = rd.int()?;
            if len == 0 || len > summary.r {
                return Err(FormatError::Inconsistent("label length"));
            }
            labels.push(rd.take(len)?.to_vec());
        }
        rd.finish()?;
        if labels
            .windows(2)
            .any(|w| colex_compare(&w[0], &w[1]) != Ordering::Less)
        {
            return Err(FormatError::Inconsistent("dictionary order"));
        }
        let dictionary = LabelDictionary::from_sorted(labels);

        let mut rd = Reader {
            width,
            buf: sections[5],
        };
        let mut postings = LabelPostings::default();
        let mut total = 0usize;
        let mut label_length = 0usize;
        for id in 0..dictionary.len() {
            let m = rd.int()?;
            if m == 0 {
                return Err(FormatError::Inconsistent("empty posting list"));
            }
            total += m;
            label_length += m * dictionary.get(id).len();
            let mut read_sorted = || -> Result<Vec<u32>, FormatError> {
                let v = (0..m)
                    .map(|_| rd.int().map(|x| x as u32))
                    .collect::<Result<Vec<u32>, _>>()?;
                if v.iter().any(|&x| x == 0 || x as usize > n) || v.windows(2).any(|w| w[0] > w[1])
                {
                    return Err(FormatError::Inconsistent("posting list"));
                }
                Ok(v)
            };
            postings.sources.push(read_sorted()?);
            postings.targets.push(read_sorted()?);
        }
        rd.finish()?;
        if total + summary.epsilon_edges != summary.edges || label_length != summary.label_length {
            return Err(FormatError::Inconsistent("edge counts"));
        }
        if dictionary.iter().map(<[u8]>::len).max().unwrap_or(0) != summary.r {
            return Err(FormatError::Inconsistent("r"));
        }

        let (length_tables, colex_table) = edge_tables(&dictionary, &postings, summary.r);

        let mut rd = Reader {
            width,
            buf: sections[6],
        };
        if rd.int()? != length_tables.r() {
            return Err(FormatError::Inconsistent("length table count"));
        }
        for c in &length_tables.classes {
            if rd.int()? != c.rows().len() {
                return Err(FormatError::Inconsistent("length table rows"));
            }
        }
        rd.finish()?;
        let mut rd = Reader {
            width,
            buf: sections[7],
        };
        if rd.int()? != colex_table.rows().len() {
            return Err(FormatError::Inconsistent("colex table rows"));
        }
        rd.finish()?;

        Ok(WheelerIndex {
            summary,
            sentinel_mode: flags & 1 == 1,
            finals,
            b_max,
            b_min,
            dictionary,
            postings,
            length_tables,
            colex_table,
        })
    }
}

struct Reader<'a> {
    width: u8,
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        if self.buf.len() < n {
            return Err(FormatError::Truncated("section contents"));
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    fn int(&mut self) -> Result<usize, FormatError> {
        let raw = self.take(self.width as usize)?;
        let mut le = [0u8; 4];
        le[..raw.len()].copy_from_slice(raw);
        Ok(u32::from_le_bytes(le) as usize)
    }

    fn finish(&self) -> Result<(), FormatError> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(FormatError::Inconsistent("section has trailing bytes"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnfa::{ten_state_example, four_state_example, GeneralizedAutomaton};

    #[test]
    fn round_trips() {
        for (a, sentinel) in [
            (ten_state_example(), false),
            (ten_state_example(), true),
            (four_state_example(), true),
            (GeneralizedAutomaton::new(1, vec![], 1, [1]).unwrap(), false),
        ] {
            let ix = WheelerIndex::build(&a, sentinel).unwrap();
            let bytes = ix.serialize();
            assert_eq!(&bytes[..4], b"WGNE");
            assert_eq!(bytes[4], 1);
            assert_eq!(bytes[5], sentinel as u8);
            assert_eq!(WheelerIndex::deserialize(&bytes).unwrap(), ix);
        }
    }

    #[test]
    fn corrupted_length_is_truncation() {
        let mut bytes = WheelerIndex::build(&ten_state_example(), false).unwrap().serialize();
        // first section length field
        bytes[6..14].copy_from_slice(&1000u64.to_le_bytes());
        assert!(matches!(
            WheelerIndex::deserialize(&bytes),
            Err(FormatError::Truncated(_))
        ));
        let full = WheelerIndex::build(&ten_state_example(), false).unwrap().serialize();
        assert!(matches!(
            WheelerIndex::deserialize(&full[..full.len() - 3]),
            Err(FormatError::Truncated(_))
        ));
    }

    #[test]
    fn header_and_checksum_errors() {
        let bytes = WheelerIndex::build(&four_state_example(), false).unwrap().serialize();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert_eq!(WheelerIndex::deserialize(&bad), Err(FormatError::BadMagic));
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert_eq!(WheelerIndex::deserialize(&bad), Err(FormatError::Version(2)));
        let mut bad = bytes.clone();
        let last_payload = bad.len() - 9;
        bad[last_payload] ^= 0x40;
        assert!(matches!(
            WheelerIndex::deserialize(&bad),
            Err(FormatError::Checksum { .. })
        ));
    }

    #[test]
    fn checksum_definition() {
        assert_eq!(checksum(&[]), 0);
        // a: 1, 3, 6 -> b: 1 + 3 + 6
        assert_eq!(checksum(&[1, 2, 3]), (10u64 << 32) | 6);
    }
}
