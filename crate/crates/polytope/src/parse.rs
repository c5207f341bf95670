//! Input readers for the two text formats: coordinate matrices behind a
//! two-number header, and (combined) weight systems with optional quotient
//! suffixes.
//!
//! Input is line oriented.  A record starts at the next non-blank line; a
//! line whose first token is not a number ends the stream (so trailers of
//! other tools pass through silently in pipelines).  A header of exactly two
//! numbers opens a coordinate matrix whose remaining entries may continue on
//! the following lines; any other line is a weight-system record contained in
//! that single line.
//!
//! Weight-system lines hold `k` equal-length blocks `d w_1 ... w_N`.  The
//! split is recovered by trying block counts from large to small and keeping
//! the first one where every block satisfies the degree convention
//! `d = sum(w)`.  A single block may also be given degree-last, or (under the
//! spectrum flag) with the degree recognized as the unique strict maximum,
//! since such input need not satisfy the degree convention at all.

use std::collections::VecDeque;
use std::io::BufRead;

use crate::config;
use crate::cws::{Cws, Quotient, WeightRow};
use crate::error::{Error, Result};
use crate::num::Int;
use crate::point::PointList;

/// Whitespace tokens pulled line by line from a reader.
pub struct TokenStream<'a> {
    src: &'a mut dyn BufRead,
    pending: VecDeque<String>,
    eof: bool,
}

impl<'a> TokenStream<'a> {
    pub fn new(src: &'a mut dyn BufRead) -> TokenStream<'a> {
        TokenStream {
            src,
            pending: VecDeque::new(),
            eof: false,
        }
    }

    /// Pull one more line into the token queue.  False at end of input.
    fn refill(&mut self) -> Result<bool> {
        if self.eof {
            return Ok(false);
        }
        let mut line = String::new();
        let n = self
            .src
            .read_line(&mut line)
            .map_err(|e| Error::Io { msg: e.to_string() })?;
        if n == 0 {
            self.eof = true;
            return Ok(false);
        }
        self.pending
            .extend(line.split_whitespace().map(str::to_owned));
        Ok(true)
    }

    /// Tokens of the next non-blank line, starting a new record: anything
    /// still pending is discarded first.  `None` at end of input.
    pub fn next_record_line(&mut self) -> Result<Option<Vec<String>>> {
        self.pending.clear();
        while self.pending.is_empty() {
            if !self.refill()? {
                return Ok(None);
            }
        }
        Ok(Some(self.pending.drain(..).collect()))
    }

    /// Next token, continuing across lines.
    pub fn next_token(&mut self) -> Result<Option<String>> {
        while self.pending.is_empty() {
            if !self.refill()? {
                return Ok(None);
            }
        }
        Ok(self.pending.pop_front())
    }

    /// Next token as an integer; missing or malformed input is an error.
    pub fn next_int(&mut self) -> Result<Int> {
        match self.next_token()? {
            None => Err(Error::parse("unexpected end of input, expected a number")),
            Some(t) => parse_int(&t),
        }
    }
}

fn parse_int(t: &str) -> Result<Int> {
    t.parse::<Int>()
        .map_err(|_| Error::parse(format!("expected a number, got `{t}'")))
}

/// First line of a record, classified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Header {
    /// Two-number header: a coordinate matrix of this shape follows.
    Matrix { rows: usize, cols: usize },
    /// Anything else: a weight-system line, kept as raw tokens.
    Line(Vec<String>),
}

/// Read the header of the next record.  `None` cleanly ends the stream: end
/// of input, or a line whose first token is not a number.
pub fn read_header(ts: &mut TokenStream) -> Result<Option<Header>> {
    let tokens = match ts.next_record_line()? {
        None => return Ok(None),
        Some(t) => t,
    };
    if parse_int(&tokens[0]).is_err() {
        return Ok(None);
    }
    if tokens.len() == 2 {
        let a = parse_int(&tokens[0])?;
        let b = parse_int(&tokens[1])?;
        if a > 0 && b > 0 {
            return Ok(Some(Header::Matrix {
                rows: a as usize,
                cols: b as usize,
            }));
        }
    }
    Ok(Some(Header::Line(tokens)))
}

/// Read `rows x cols` integers and return them as a point list; the smaller
/// header number is the dimension, so points are the columns when
/// `rows <= cols` and the rows otherwise.
pub fn read_matrix(ts: &mut TokenStream, rows: usize, cols: usize) -> Result<PointList> {
    let dim = rows.min(cols);
    let np = rows.max(cols);
    if dim > config::DIM_MAX {
        return Err(Error::Capacity {
            param: config::DIM_MAX_NAME,
            needed: dim,
        });
    }
    if np > config::POINT_MAX {
        return Err(Error::Capacity {
            param: config::POINT_MAX_NAME,
            needed: np,
        });
    }
    let mut a = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        a.push(ts.next_int()?);
    }
    let mut pl = PointList::with_capacity(dim, np);
    let mut p = vec![0 as Int; dim];
    for j in 0..np {
        for (i, v) in p.iter_mut().enumerate() {
            // Entry (i, j) of the dim x np matrix of column points.
            *v = if rows <= cols {
                a[i * cols + j]
            } else {
                a[j * cols + i]
            };
        }
        pl.push(&p);
    }
    Ok(pl)
}

/// One parsed input polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyInput {
    Matrix(PointList),
    Cws(Cws),
}

/// Read the next record completely.  `matrix_prompt` runs between the header
/// and the coordinates of a matrix record so interactive use can explain what
/// is expected; it receives the header as typed.
pub fn read_input(
    ts: &mut TokenStream,
    lg: bool,
    matrix_prompt: &mut dyn FnMut(usize, usize),
) -> Result<Option<PolyInput>> {
    match read_header(ts)? {
        None => Ok(None),
        Some(Header::Matrix { rows, cols }) => {
            matrix_prompt(rows, cols);
            Ok(Some(PolyInput::Matrix(read_matrix(ts, rows, cols)?)))
        }
        Some(Header::Line(tokens)) => Ok(Some(PolyInput::Cws(parse_cws_tokens(&tokens, lg)?))),
    }
}

/// Split the leading run of numeric tokens from a weight-system line.
fn numeric_prefix(tokens: &[String]) -> (Vec<Int>, usize) {
    let mut nums = Vec::new();
    for t in tokens {
        match t.parse::<Int>() {
            Ok(v) => nums.push(v),
            Err(_) => break,
        }
    }
    let used = nums.len();
    (nums, used)
}

fn block_is_cy(block: &[Int]) -> bool {
    block[0] > 0 && block[1..].iter().all(|&w| w >= 0) && block[1..].iter().sum::<Int>() == block[0]
}

/// Degree position of a single block: degree-first, else degree-last.  Only
/// spectrum input may break the degree convention; there the unique strict
/// maximum is accepted as a final fallback.
fn split_single(nums: &[Int], lg: bool) -> Result<(Int, Vec<Int>)> {
    if nums.len() < 2 {
        return Err(Error::parse("a weight system needs a degree and weights"));
    }
    let sum_rest: Int = nums[1..].iter().sum();
    if nums[0] == sum_rest {
        return Ok((nums[0], nums[1..].to_vec()));
    }
    let last = nums[nums.len() - 1];
    let sum_front: Int = nums[..nums.len() - 1].iter().sum();
    if last == sum_front {
        return Ok((last, nums[..nums.len() - 1].to_vec()));
    }
    if lg {
        let max = *nums.iter().max().unwrap();
        if nums.iter().filter(|&&v| v == max).count() == 1 {
            let pos = nums.iter().position(|&v| v == max).unwrap();
            let mut w = nums.to_vec();
            w.remove(pos);
            return Ok((max, w));
        }
        return Err(Error::parse(
            "cannot locate the degree: no weight sum matches and no unique maximum",
        ));
    }
    Err(Error::parse(format!(
        "weights never sum to the degree in the {} numbers given",
        nums.len()
    )))
}

/// Segment the numeric tokens of a weight-system line into equal-length
/// blocks `d w_1 ... w_N`, preferring more blocks: every multi-block split
/// must be degree-balanced in each block, so the first split that checks out
/// is the intended one.
fn segment(nums: &[Int], lg: bool) -> Result<Vec<WeightRow>> {
    let l = nums.len();
    if l < 2 {
        return Err(Error::parse("a weight system needs a degree and weights"));
    }
    if !lg {
        // Block length >= 2, block count k needs N = len-1 > k for a
        // positive-dimensional polytope; larger k is tried first.
        for k in (2..=l / 3).rev() {
            if l % k != 0 {
                continue;
            }
            let len = l / k;
            if len < 3 || len - 1 <= k {
                continue;
            }
            let blocks: Vec<&[Int]> = nums.chunks(len).collect();
            if blocks.iter().all(|b| block_is_cy(b)) {
                return Ok(blocks
                    .iter()
                    .map(|b| WeightRow {
                        d: b[0],
                        w: b[1..].to_vec(),
                    })
                    .collect());
            }
        }
    }
    let (d, w) = split_single(nums, lg)?;
    Ok(vec![WeightRow { d, w }])
}

/// Parse a full weight-system line: blocks, then `/Zm: a_1 ... a_N` quotient
/// suffixes.  With `lg` set exactly one block is read and the degree
/// convention is not required.
pub fn parse_cws_tokens(tokens: &[String], lg: bool) -> Result<Cws> {
    let (nums, used) = numeric_prefix(tokens);
    let rows = segment(&nums, lg)?;
    let ncols = rows[0].w.len();
    if lg && rows.len() != 1 {
        return Err(Error::parse("spectrum input takes a single weight system"));
    }
    if ncols > config::WEIGHT_MAX {
        return Err(Error::Capacity {
            param: config::WEIGHT_MAX_NAME,
            needed: ncols,
        });
    }
    let dim = ncols - rows.len();
    if dim > config::DIM_MAX {
        return Err(Error::Capacity {
            param: config::DIM_MAX_NAME,
            needed: dim,
        });
    }
    for r in &rows {
        if r.d <= 0 {
            return Err(Error::parse(format!("degree {} is not positive", r.d)));
        }
        if r.w.iter().any(|&w| w < 0) {
            return Err(Error::parse("weights must be non-negative"));
        }
    }
    for i in 0..ncols {
        if rows.iter().all(|r| r.w[i] == 0) {
            return Err(Error::parse(format!(
                "coordinate {} has weight zero in every system",
                i + 1
            )));
        }
    }

    let mut quotients = Vec::new();
    let mut rest = &tokens[used..];
    while !rest.is_empty() {
        let head = &rest[0];
        let m = head
            .strip_prefix("/Z")
            .and_then(|s| s.strip_suffix(':'))
            .and_then(|s| s.parse::<Int>().ok())
            .ok_or_else(|| {
                Error::parse(format!("expected a quotient suffix `/Zm:', got `{head}'"))
            })?;
        if m < 2 {
            return Err(Error::parse(format!(
                "quotient order {m} must be at least 2"
            )));
        }
        if rest.len() < 1 + ncols {
            return Err(Error::parse(format!(
                "quotient action needs {ncols} residues"
            )));
        }
        let mut a = Vec::with_capacity(ncols);
        for t in &rest[1..=ncols] {
            let r = parse_int(t)?;
            if r < 0 || r >= m {
                return Err(Error::parse(format!(
                    "quotient residue {r} is out of range for /Z{m}"
                )));
            }
            a.push(r);
        }
        quotients.push(Quotient { m, a });
        rest = &rest[1 + ncols..];
    }

    Ok(Cws {
        rows,
        ncols,
        quotients,
    })
}

/// Parse a one-line string (tests and file filters).
pub fn parse_cws_line(line: &str, lg: bool) -> Result<Cws> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
    if tokens.is_empty() {
        return Err(Error::parse("empty weight-system line"));
    }
    parse_cws_tokens(&tokens, lg)
}
