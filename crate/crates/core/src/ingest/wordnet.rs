//! Reader for the WNdb 3.0 noun files (`data.noun`, `index.noun`, optional `noun.exc`).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use crate::taxonomy::{normalize_word, RawGraph, RawNode, SynsetId};

use super::IngestError;

/// One synset line of `data.noun`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSynsetRecord {
    pub offset: String,
    pub lex_filenum: u8,
    pub lemmas: Vec<String>,
    pub pointers: Vec<Pointer>,
    pub gloss: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pointer {
    pub symbol: String,
    pub target_offset: String,
    pub target_pos: char,
    pub source_target: String,
}

impl Pointer {
    pub fn is_hypernym(&self) -> bool {
        self.target_pos == 'n' && (self.symbol == "@" || self.symbol == "@i")
    }

    pub fn is_hyponym(&self) -> bool {
        self.target_pos == 'n' && (self.symbol == "~" || self.symbol == "~i")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordIndexEntry {
    pub lemma: String,
    pub sense_offsets: Vec<String>,
}

/// A hyponym pointer without the matching reverse hypernym pointer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryViolation {
    pub from: SynsetId,
    pub symbol: String,
    pub to: SynsetId,
}

#[derive(Debug, Clone)]
pub struct WordNet {
    pub graph: RawGraph,
    pub index: Vec<WordIndexEntry>,
    /// Inflected form -> base forms, from `noun.exc` when present.
    pub exceptions: BTreeMap<String, Vec<String>>,
    pub symmetry_violations: Vec<SymmetryViolation>,
}

impl WordNet {
    /// Word index in the shape [`crate::Taxonomy::with_word_index`] takes,
    /// with exception-list forms resolved to their base senses.
    pub fn word_index(&self) -> Vec<(String, Vec<SynsetId>)> {
        let mut map: BTreeMap<String, Vec<SynsetId>> = self
            .index
            .iter()
            .map(|e| (e.lemma.clone(), e.sense_offsets.iter().map(|o| synset_id(o)).collect()))
            .collect();
        for (form, bases) in &self.exceptions {
            if map.contains_key(form) {
                continue;
            }
            let mut senses: Vec<SynsetId> = Vec::new();
            for b in bases {
                for s in map.get(b).into_iter().flatten() {
                    if !senses.contains(s) {
                        senses.push(s.clone());
                    }
                }
            }
            if !senses.is_empty() {
                map.insert(form.clone(), senses);
            }
        }
        map.into_iter().collect()
    }
}

/// `00001740` -> `00001740-n`.
pub fn synset_id(offset: &str) -> SynsetId {
    SynsetId::new(format!("{offset}-n"))
}

pub fn parse_wordnet(dir: impl AsRef<Path>) -> Result<WordNet, IngestError> {
    let dir = dir.as_ref();
    let data_path = dir.join("data.noun");
    let index_path = dir.join("index.noun");
    let data = read(&data_path)?;
    let index = read(&index_path)?;

    let records = parse_data(&data, &data_path)?;
    let index = parse_index(&index, &index_path)?;
    let exc_path = dir.join("noun.exc");
    let exceptions = if exc_path.exists() {
        parse_exceptions(&read(&exc_path)?, &exc_path)?
    } else {
        BTreeMap::new()
    };
    build(records, index, exceptions, &data_path, &index_path)
}

fn read(path: &Path) -> Result<String, IngestError> {
    if !path.is_file() {
        return Err(IngestError::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|e| IngestError::Io { path: path.to_path_buf(), source: e })
}

fn malformed(path: &Path, line: usize, byte: usize, reason: impl Into<String>) -> IngestError {
    IngestError::MalformedLine {
        path: path.to_path_buf(),
        line,
        byte_offset: byte,
        reason: reason.into(),
    }
}

/// Parses every synset line of a `data.*` file. Header lines start with two spaces.
pub fn parse_data(text: &str, path: &Path) -> Result<Vec<RawSynsetRecord>, IngestError> {
    let mut out = Vec::new();
    let mut byte = 0usize;
    for (lineno, line) in text.split_inclusive('\n').enumerate() {
        let start = byte;
        byte += line.len();
        let line = line.trim_end_matches(['\n', '\r']);
        if line.starts_with("  ") || line.is_empty() {
            continue;
        }
        let rec = parse_data_line(line)
            .map_err(|reason| malformed(path, lineno + 1, start, reason))?;
        if rec.offset.parse::<usize>().ok() != Some(start) {
            return Err(malformed(
                path,
                lineno + 1,
                start,
                format!("synset offset {} does not match byte position", rec.offset),
            ));
        }
        out.push(rec);
    }
    Ok(out)
}

fn parse_data_line(line: &str) -> Result<RawSynsetRecord, String> {
    let (fields, gloss) = match line.split_once(" | ") {
        Some((f, g)) => (f, g.trim_end().to_owned()),
        None => (line.trim_end_matches(" |"), String::new()),
    };
    let mut tok = fields.split_ascii_whitespace();
    let mut next = |what: &str| tok.next().ok_or_else(|| format!("missing {what}"));

    let offset = next("synset_offset")?;
    if offset.len() != 8 || !offset.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("bad synset_offset `{offset}`"));
    }
    let lex_filenum = next("lex_filenum")?
        .parse::<u8>()
        .map_err(|e| format!("bad lex_filenum: {e}"))?;
    let ss_type = next("ss_type")?;
    if ss_type != "n" {
        return Err(format!("ss_type `{ss_type}` is not a noun"));
    }
    let w_cnt = usize::from_str_radix(next("w_cnt")?, 16).map_err(|e| format!("bad w_cnt: {e}"))?;
    let mut lemmas = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        lemmas.push(next("word")?.to_owned());
        next("lex_id")?;
    }
    let p_cnt = next("p_cnt")?.parse::<usize>().map_err(|e| format!("bad p_cnt: {e}"))?;
    let mut pointers = Vec::with_capacity(p_cnt);
    for _ in 0..p_cnt {
        let symbol = next("pointer_symbol")?.to_owned();
        let target_offset = next("pointer offset")?.to_owned();
        let pos = next("pointer pos")?;
        let source_target = next("pointer source/target")?.to_owned();
        let target_pos = match pos {
            "n" | "v" | "a" | "s" | "r" => pos.chars().next().unwrap(),
            other => return Err(format!("bad pointer pos `{other}`")),
        };
        if target_offset.len() != 8 || !target_offset.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad pointer offset `{target_offset}`"));
        }
        pointers.push(Pointer { symbol, target_offset, target_pos, source_target });
    }
    Ok(RawSynsetRecord { offset: offset.to_owned(), lex_filenum, lemmas, pointers, gloss })
}

/// Parses `index.noun` into lemma entries in file order.
pub fn parse_index(text: &str, path: &Path) -> Result<Vec<WordIndexEntry>, IngestError> {
    let mut out = Vec::new();
    let mut byte = 0usize;
    for (lineno, line) in text.split_inclusive('\n').enumerate() {
        let start = byte;
        byte += line.len();
        let line = line.trim_end_matches(['\n', '\r']);
        if line.starts_with("  ") || line.is_empty() {
            continue;
        }
        let entry =
            parse_index_line(line).map_err(|reason| malformed(path, lineno + 1, start, reason))?;
        out.push(entry);
    }
    Ok(out)
}

fn parse_index_line(line: &str) -> Result<WordIndexEntry, String> {
    let tok: Vec<&str> = line.split_ascii_whitespace().collect();
    let get = |i: usize, what: &str| tok.get(i).copied().ok_or_else(|| format!("missing {what}"));
    let lemma = get(0, "lemma")?;
    let pos = get(1, "pos")?;
    if pos != "n" {
        return Err(format!("pos `{pos}` is not a noun"));
    }
    let synset_cnt = get(2, "synset_cnt")?.parse::<usize>().map_err(|e| e.to_string())?;
    let p_cnt = get(3, "p_cnt")?.parse::<usize>().map_err(|e| e.to_string())?;
    // lemma pos synset_cnt p_cnt [ptr_symbol...] sense_cnt tagsense_cnt synset_offset...
    let first = 4 + p_cnt + 2;
    let offsets: Vec<String> = tok.get(first..).unwrap_or(&[]).iter().map(|s| s.to_string()).collect();
    if offsets.len() != synset_cnt {
        return Err(format!("expected {synset_cnt} synset offsets, found {}", offsets.len()));
    }
    if let Some(bad) = offsets.iter().find(|o| o.len() != 8 || !o.bytes().all(|b| b.is_ascii_digit())) {
        return Err(format!("bad synset offset `{bad}`"));
    }
    Ok(WordIndexEntry { lemma: normalize_word(lemma), sense_offsets: offsets })
}

/// Parses an exception list: `inflected base [base...]` per line.
pub fn parse_exceptions(
    text: &str,
    path: &Path,
) -> Result<BTreeMap<String, Vec<String>>, IngestError> {
    let mut out = BTreeMap::new();
    let mut byte = 0usize;
    for (lineno, line) in text.split_inclusive('\n').enumerate() {
        let start = byte;
        byte += line.len();
        let mut tok = line.split_ascii_whitespace();
        let Some(form) = tok.next() else { continue };
        let bases: Vec<String> = tok.map(normalize_word).collect();
        if bases.is_empty() {
            return Err(malformed(path, lineno + 1, start, "exception without base form"));
        }
        out.insert(normalize_word(form), bases);
    }
    Ok(out)
}

fn build(
    records: Vec<RawSynsetRecord>,
    index: Vec<WordIndexEntry>,
    exceptions: BTreeMap<String, Vec<String>>,
    data_path: &Path,
    index_path: &Path,
) -> Result<WordNet, IngestError> {
    let known: HashMap<&str, usize> =
        records.iter().enumerate().map(|(i, r)| (r.offset.as_str(), i)).collect();

    let mut graph = RawGraph::default();
    let mut hypernyms: BTreeSet<(String, String)> = BTreeSet::new();
    let mut hyponym_claims: Vec<(String, String, String)> = Vec::new();

    for r in &records {
        graph.nodes.push(RawNode {
            id: synset_id(&r.offset),
            lemmas: r.lemmas.clone(),
            gloss: (!r.gloss.is_empty()).then(|| r.gloss.clone()),
        });
        for p in &r.pointers {
            if p.target_pos != 'n' {
                continue;
            }
            if !known.contains_key(p.target_offset.as_str()) {
                return Err(IngestError::DanglingPointer {
                    path: data_path.to_path_buf(),
                    from: r.offset.clone(),
                    to: p.target_offset.clone(),
                });
            }
            if p.is_hypernym() {
                let edge = (synset_id(&r.offset), synset_id(&p.target_offset));
                if p.symbol == "@i" {
                    graph.instance_edges.insert(edge.clone());
                }
                graph.edges.push(edge);
                hypernyms.insert((r.offset.clone(), p.target_offset.clone()));
            } else if p.is_hyponym() {
                hyponym_claims.push((r.offset.clone(), p.symbol.clone(), p.target_offset.clone()));
            }
        }
    }

    let symmetry_violations = hyponym_claims
        .into_iter()
        .filter(|(parent, _, child)| !hypernyms.contains(&(child.clone(), parent.clone())))
        .map(|(parent, symbol, child)| SymmetryViolation {
            from: synset_id(&parent),
            symbol,
            to: synset_id(&child),
        })
        .collect();

    for e in &index {
        if let Some(o) = e.sense_offsets.iter().find(|o| !known.contains_key(o.as_str())) {
            return Err(IngestError::DanglingPointer {
                path: index_path.to_path_buf(),
                from: e.lemma.clone(),
                to: o.clone(),
            });
        }
    }

    Ok(WordNet { graph, index, exceptions, symmetry_violations })
}

/// Directory from `SEMSIM_WORDNET_DIR`, if set.
pub fn default_dir() -> Option<PathBuf> {
    std::env::var_os("SEMSIM_WORDNET_DIR").map(PathBuf::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Offsets are byte positions, so the fixture is assembled line by line.
    fn fixture(child_has_hypernym: bool) -> (String, String) {
        let mut data =
            String::from("  1 This software and database is being provided to you, the LICENSEE\n");
        let root_off = data.len();
        // Offsets are always 8 digits, so the root line length is known up front.
        let root_line =
            |child: usize| format!("{root_off:08} 03 n 01 entity 0 001 ~ {child:08} n 0000 | that which is perceived\n");
        let child_off = root_off + root_line(0).len();
        data.push_str(&root_line(child_off));
        let ptrs = if child_has_hypernym {
            format!("001 @ {root_off:08} n 0000")
        } else {
            "000".to_owned()
        };
        data.push_str(&format!("{child_off:08} 03 n 02 thing 0 Cell_Phone 0 {ptrs} | a thing\n"));
        let index = format!(
            "  1 header\nentity n 1 1 ~ 1 0 {root_off:08}  \nthing n 1 1 @ 1 0 {child_off:08}  \ncell_phone n 1 1 @ 1 0 {child_off:08}  \n"
        );
        (data, index)
    }

    fn write_dir(data: &str, index: Option<&str>) -> tempfile::TempDir {
        let d = tempfile::tempdir().unwrap();
        fs::write(d.path().join("data.noun"), data).unwrap();
        if let Some(index) = index {
            fs::write(d.path().join("index.noun"), index).unwrap();
        }
        d
    }

    #[test]
    fn hypernym_pointer_becomes_edge() {
        let line = "00002137 03 n 02 abstraction 0 abstract_entity 0 001 @ 00001740 n 0000 | a general concept";
        let rec = parse_data_line(line).unwrap();
        assert_eq!(rec.lemmas, ["abstraction", "abstract_entity"]);
        assert_eq!(rec.pointers.len(), 1);
        assert!(rec.pointers[0].is_hypernym());
        assert_eq!(rec.pointers[0].target_offset, "00001740");
        assert_eq!(rec.gloss, "a general concept");
    }

    #[test]
    fn w_cnt_is_hex() {
        let mut line = String::from("00000010 03 n 0a");
        for i in 0..10 {
            line.push_str(&format!(" w{i} 0"));
        }
        line.push_str(" 000 | ten words");
        assert_eq!(parse_data_line(&line).unwrap().lemmas.len(), 10);
    }

    #[test]
    fn parses_fixture_directory() {
        let (data, index) = fixture(true);
        let d = write_dir(&data, Some(&index));
        let wn = parse_wordnet(d.path()).unwrap();
        assert_eq!(wn.graph.nodes.len(), 2);
        assert_eq!(wn.graph.edges.len(), 1);
        assert!(wn.symmetry_violations.is_empty());
        let wi = wn.word_index();
        let cell = wi.iter().find(|(l, _)| l == "cell_phone").unwrap();
        assert_eq!(cell.1.len(), 1);
    }

    #[test]
    fn missing_index_file() {
        let (data, _) = fixture(true);
        let d = write_dir(&data, None);
        assert!(matches!(parse_wordnet(d.path()), Err(IngestError::MissingFile(_))));
    }

    #[test]
    fn offset_must_match_byte_position() {
        let (data, index) = fixture(true);
        let shifted = data.replacen("  1 This", "   1 This", 1);
        let d = write_dir(&shifted, Some(&index));
        match parse_wordnet(d.path()) {
            Err(IngestError::MalformedLine { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_pointer() {
        let line = "00000000 03 n 01 x 0 001 @ 99999999 n 0000 | dangling\n";
        let d = write_dir(line, Some("x n 1 0 1 0 00000000  \n"));
        assert!(matches!(parse_wordnet(d.path()), Err(IngestError::DanglingPointer { .. })));
    }

    #[test]
    fn truncated_line_is_malformed() {
        let err = parse_data_line("00000000 03 n 02 only_one 0").unwrap_err();
        assert!(err.contains("missing"));
    }

    #[test]
    fn exceptions_resolve_to_base_senses() {
        let (data, index) = fixture(true);
        let d = write_dir(&data, Some(&index));
        fs::write(d.path().join("noun.exc"), "things thing\n").unwrap();
        let wn = parse_wordnet(d.path()).unwrap();
        let wi = wn.word_index();
        assert!(wi.iter().any(|(l, s)| l == "things" && s.len() == 1));
    }

    #[test]
    fn asymmetric_hyponym_pointer_is_reported() {
        let (data, index) = fixture(false);
        let d = write_dir(&data, Some(&index));
        let wn = parse_wordnet(d.path()).unwrap();
        assert_eq!(wn.symmetry_violations.len(), 1);
        assert!(wn.graph.edges.is_empty());
    }
}
