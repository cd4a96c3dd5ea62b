//! graph6 reader and writer.
//!
//! A record is the size field `N(n)` followed by the upper triangle of the
//! adjacency matrix in column order `(0,1), (0,2), (1,2), (0,3), ...`,
//! packed six bits per byte (most significant first), each byte offset by 63
//! and the last byte zero-padded.

use std::io::BufRead;

use crate::error::{Error, Graph6Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

const OFFSET: u8 = 63;
const HEADER: &str = ">>graph6<<";

fn size_field(n: usize) -> Vec<u8> {
    let n = n as u64;
    let six = |shift: u32| OFFSET + ((n >> shift) & 0x3f) as u8;
    if n <= 62 {
        vec![OFFSET + n as u8]
    } else if n <= 258_047 {
        vec![126, six(12), six(6), six(0)]
    } else {
        vec![126, 126, six(30), six(24), six(18), six(12), six(6), six(0)]
    }
}

/// Encodes `g` as a graph6 record without trailing newline.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = size_field(n);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(OFFSET + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(OFFSET + (acc << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

/// Decodes one graph6 record. A trailing carriage return is ignored.
pub fn decode_graph6(line: &str) -> Result<Graph> {
    decode_bytes(line.trim_end_matches(['\r', '\n']).as_bytes()).map_err(|kind| Error::Graph6 {
        line: None,
        kind,
    })
}

fn decode_bytes(bytes: &[u8]) -> std::result::Result<Graph, Graph6Error> {
    if let Some(offset) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return Err(Graph6Error::MalformedByte {
            byte: bytes[offset],
            offset,
        });
    }
    let six = |b: u8| (b - OFFSET) as u64;
    let (n, header) = match bytes {
        [] => return Err(Graph6Error::Empty),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(Graph6Error::WrongLength {
                    expected: 8,
                    found: bytes.len(),
                });
            }
            (rest[..6].iter().fold(0, |acc, &b| (acc << 6) | six(b)), 8)
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Graph6Error::WrongLength {
                    expected: 4,
                    found: bytes.len(),
                });
            }
            (rest[..3].iter().fold(0, |acc, &b| (acc << 6) | six(b)), 4)
        }
        [first, ..] => (six(*first), 1),
    };
    if n > MAX_VERTICES as u64 {
        return Err(Graph6Error::Oversize(n));
    }
    let n = n as usize;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = header + bits.div_ceil(6);
    if bytes.len() != expected {
        return Err(Graph6Error::WrongLength {
            expected,
            found: bytes.len(),
        });
    }
    let body = &bytes[header..];
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - OFFSET;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::from_edges(n, edges).expect("decoded edges are distinct and in range"))
}

/// How a stream reader treats malformed records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReadMode {
    /// Yield the error and stop.
    #[default]
    Strict,
    /// Skip the record and count it.
    Lenient,
}

/// Streams graphs from line-oriented graph6 input.
///
/// An optional `>>graph6<<` header is skipped and blank lines are ignored.
/// Items carry the 1-based line number of the record.
pub struct Graph6Reader<R> {
    input: R,
    mode: ReadMode,
    line_no: usize,
    skipped: usize,
    done: bool,
    buf: String,
}

impl<R: BufRead> Graph6Reader<R> {
    pub fn new(input: R, mode: ReadMode) -> Self {
        Graph6Reader {
            input,
            mode,
            line_no: 0,
            skipped: 0,
            done: false,
            buf: String::new(),
        }
    }

    /// Malformed records skipped so far in lenient mode.
    pub fn skipped(&self) -> usize {
        self.skipped
    }
}

impl<R: BufRead> Iterator for Graph6Reader<R> {
    type Item = Result<(usize, Graph)>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            match self.input.read_line(&mut self.buf) {
                Ok(0) => self.done = true,
                Ok(_) => {
                    self.line_no += 1;
                    let mut line = self.buf.trim_end_matches(['\n', '\r']);
                    if let Some(rest) = line.strip_prefix(HEADER) {
                        line = rest;
                    }
                    if line.is_empty() {
                        continue;
                    }
                    match decode_bytes(line.as_bytes()) {
                        Ok(g) => return Some(Ok((self.line_no, g))),
                        Err(kind) => match self.mode {
                            ReadMode::Lenient => self.skipped += 1,
                            ReadMode::Strict => {
                                self.done = true;
                                return Some(Err(Error::Graph6 {
                                    line: Some(self.line_no),
                                    kind,
                                }));
                            }
                        },
                    }
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            }
        }
        None
    }
}

/// Reads every record of a stream in strict mode.
pub fn stream_graph6<R: BufRead>(input: R) -> Result<Vec<Graph>> {
    Graph6Reader::new(input, ReadMode::Strict)
        .map(|r| r.map(|(_, g)| g))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_family, FamilyKind};

    fn k3() -> Graph {
        make_family(FamilyKind::Complete, &[3]).unwrap()
    }

    fn p3() -> Graph {
        make_family(FamilyKind::Path, &[3]).unwrap()
    }

    #[test]
    fn hand_encoded_fixtures() {
        assert_eq!(decode_graph6("Bw").unwrap(), k3());
        assert_eq!(decode_graph6("Bg").unwrap(), p3());
        assert_eq!(decode_graph6("?").unwrap(), Graph::empty(0).unwrap());
        assert_eq!(encode_graph6(&k3()), "Bw");
        assert_eq!(encode_graph6(&p3()), "Bg");
        assert_eq!(encode_graph6(&Graph::empty(1).unwrap()), "@");
        assert_eq!(decode_graph6("Bw\r").unwrap(), k3());
    }

    #[test]
    fn decode_errors() {
        let kind = |s: &str| match decode_graph6(s) {
            Err(Error::Graph6 { kind, .. }) => kind,
            other => panic!("expected graph6 error, got {other:?}"),
        };
        assert_eq!(
            kind("B w"),
            Graph6Error::MalformedByte {
                byte: b' ',
                offset: 1
            }
        );
        assert_eq!(
            kind("Bww"),
            Graph6Error::WrongLength {
                expected: 2,
                found: 3
            }
        );
        assert_eq!(
            kind("B"),
            Graph6Error::WrongLength {
                expected: 2,
                found: 1
            }
        );
        assert_eq!(kind(""), Graph6Error::Empty);
        // n = 258047 via the four-byte size field
        assert_eq!(kind("~}~~"), Graph6Error::Oversize(258_047));
        assert_eq!(
            kind("~?"),
            Graph6Error::WrongLength {
                expected: 4,
                found: 2
            }
        );
    }

    #[test]
    fn large_size_fields() {
        let g = make_family(FamilyKind::Path, &[63]).unwrap();
        let s = encode_graph6(&g);
        assert!(s.starts_with("~??~"));
        assert_eq!(s.len(), 4 + (63 * 62 / 2usize).div_ceil(6));
        assert_eq!(decode_graph6(&s).unwrap(), g);

        let g = make_family(FamilyKind::Cycle, &[300]).unwrap();
        assert_eq!(decode_graph6(&encode_graph6(&g)).unwrap(), g);
        assert_eq!(size_field(300_000).len(), 8);
        assert_eq!(size_field(300_000)[..2], [126, 126]);
    }

    #[test]
    fn encoded_length() {
        for n in 1..=62 {
            let g = make_family(FamilyKind::Complete, &[n]).unwrap();
            assert_eq!(encode_graph6(&g).len(), 1 + (n * (n - 1)).div_ceil(12));
        }
    }

    #[test]
    fn streams() {
        let gs = stream_graph6("Bw\nBg".as_bytes()).unwrap();
        assert_eq!(gs, vec![k3(), p3()]);
        assert!(stream_graph6("".as_bytes()).unwrap().is_empty());
        assert_eq!(stream_graph6(">>graph6<<\nBw\n".as_bytes()).unwrap(), vec![k3()]);
        assert_eq!(stream_graph6(">>graph6<<Bw\r\n".as_bytes()).unwrap(), vec![k3()]);
    }

    #[test]
    fn stream_error_modes() {
        let input = "Bw\nB!\nBg\n";
        let err = stream_graph6(input.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Graph6 { line: Some(2), .. }));

        let mut reader = Graph6Reader::new(input.as_bytes(), ReadMode::Lenient);
        let got: Vec<_> = reader.by_ref().map(|r| r.unwrap()).collect();
        assert_eq!(got, vec![(1, k3()), (3, p3())]);
        assert_eq!(reader.skipped(), 1);
    }
}
