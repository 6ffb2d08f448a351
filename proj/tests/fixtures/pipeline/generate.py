#!/usr/bin/env python3
# Copyright 2026 The ontoenrich Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the end-to-end pipeline fixture.

Outputs (next to this script):
  seed.tsv          synthetic security seed ontology, 408 concepts
  hypernyms.tsv     edges served by the mock SPARQL endpoint
  curation.tsv      relabels endpoint pairs to INSTANCE, CONCEPT and NONE
  dump.xml          MediaWiki-style dump: one article per queried concept,
                    the anchor article and one off-topic article
  parses.conll      pre-parsed sentences for the dump and the web page
  page.html         the web page used by `enrich`
  embeddings.txt    word vectors: security words share a common direction
  calibration.tsv   labeled pairs for `calibrate`
  pipeline.conf     configuration for the whole pipeline

Everything is deterministic; rerunning rewrites identical files.
"""

import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
DIM = 32
RNG = random.Random(20260415)

# concept -> (hypernyms, hyponyms, instances, unrelated)
GENERIC = {
    "firewall": (["network security system", "perimeter control"],
                 ["packet filter", "application firewall"],
                 ["Zentry Wall", "Bastion Guard"],
                 ["building code", "fire door"]),
    "malware": (["malicious software", "cyber threat"],
                ["computer worm", "ransomware"],
                ["Corvus Worm", "Talon Bot"],
                ["hardware store", "garden tool"]),
    "intrusion detection system": (["security monitor", "detection system"],
                                   ["network sensor", "host sensor"],
                                   ["Vantage Sensor", "Orbit Watch"],
                                   ["weather station", "bird watching"]),
    "access control": (["security control", "authorization mechanism"],
                       ["role based access control", "mandatory access control"],
                       ["Aegis Gate", "Quorum Lock"],
                       ["door handle", "parking permit"]),
    "encryption": (["cryptographic process", "data protection"],
                   ["symmetric encryption", "public key encryption"],
                   ["Krypton Cipher", "Nimbus Vault"],
                   ["secret recipe", "music notation"]),
    "authentication": (["identity verification", "security process"],
                       ["password authentication", "token authentication"],
                       ["Halcyon Pass", "Acme Token"],
                       ["art appraisal", "wine tasting"]),
    "vulnerability scanner": (["security tool", "audit software"],
                              ["web scanner", "port scanner"],
                              ["Talon Scan", "Orbit Probe"],
                              ["barcode reader", "photo album"]),
    "network attack": (["cyber attack", "security incident"],
                       ["flood attack", "spoofing attack"],
                       ["Nimbus Flood", "Corvus Storm"],
                       ["heart attack", "chess opening"]),
    "spyware": (["malicious program", "privacy threat"],
                ["keylogger", "adware"],
                ["Quorum Spy", "Zentry Logger"],
                ["spy novel", "detective film"]),
    "email filter": (["content filter", "messaging security"],
                     ["spam filter", "phishing filter"],
                     ["Acme Mail Guard", "Vantage Inbox"],
                     ["coffee filter", "water jug"]),
    "security policy": (["governance document", "security standard"],
                        ["password policy", "backup policy"],
                        ["Bastion Policy Pack", "Aegis Baseline"],
                        ["insurance policy", "school uniform"]),
    "incident response": (["security operation", "operational procedure"],
                          ["forensic analysis", "breach containment"],
                          ["Halcyon Responder", "Krypton Triage"],
                          ["fire drill", "first aid"]),
}

# Product concepts of the seed -> their classes (relabeled CONCEPT).
PRODUCTS = {
    "Sentinel One Shield": ["endpoint protection", "antivirus software"],
    "Corvus Vault": ["password manager", "secret store"],
    "Aegis Proxy": ["web proxy", "network gateway"],
    "Talon Firewall": ["firewall appliance", "network appliance"],
    "Nimbus Key": ["hardware token", "authentication device"],
    "Halcyon Scanner": ["assessment tool", "compliance scanner"],
    "Orbit Sentinel": ["security analytics", "log analyzer"],
    "Bastion Crypt": ["disk encryption", "encryption software"],
}

# Annex A sections and their control counts (114 controls in 14 groups).
SECTIONS = [
    (5, "information security policies", 2),
    (6, "organization of information security", 7),
    (7, "human resource security", 6),
    (8, "asset management", 10),
    (9, "access control area", 14),
    (10, "cryptography", 2),
    (11, "physical and environmental security", 15),
    (12, "operations security", 14),
    (13, "communications security", 7),
    (14, "system acquisition development and maintenance", 13),
    (15, "supplier relationships", 5),
    (16, "information security incident management", 7),
    (17, "business continuity security", 4),
    (18, "compliance", 8),
]
SEED_CONCEPTS = 408

OFF_WORDS = """building code fire door hardware store garden tool weather station bird
watching door handle parking permit secret recipe music notation art appraisal wine
tasting barcode reader photo album heart chess opening spy novel detective film coffee
water jug insurance school uniform drill first aid pizza oven kitchen appliance
football match holiday trip river boat painting lesson cooking class recipe book
tomato sauce bread flour construction regulation kitchen appliance""".split()

FUNCTION_WORDS = """is a an the of to in and were was as same mentioned report
includes include belongs belong example form type products product classified classify
discussed discuss before mention""".split()


def cap(s):
    return s[0].upper() + s[1:]


def resource(label):
    """Mirrors dbpedia_resource_name for the plain labels used here."""
    return cap(label.strip()).replace(" ", "_")


def norm(label):
    return " ".join(label.lower().split())


# ---------------------------------------------------------------- sentences

class Sentence:
    def __init__(self):
        self.toks = []  # [surface, lemma, pos, dep, head]

    def add(self, surface, lemma, pos, dep):
        self.toks.append([surface, lemma, pos, dep, None])
        return len(self.toks) - 1

    def term(self, text, dep):
        words = text.split()
        proper = text[0].isupper() and text != text.lower()
        pos = "PROPN" if proper else "NOUN"
        idx = [self.add(w, w.lower(), pos, "compound") for w in words]
        head = idx[-1]
        self.toks[head][3] = dep
        for i in idx[:-1]:
            self.toks[i][4] = head
        return head

    def link(self, child, head):
        self.toks[child][4] = head

    def finish(self, root):
        self.toks[root][4] = root
        dot = self.add(".", ".", "PUNCT", "punct")
        self.link(dot, root)
        first = self.toks[0]
        first[0] = cap(first[0])
        assert all(t[4] is not None for t in self.toks)
        return self

    def text(self):
        return " ".join(t[0] for t in self.toks[:-1]) + "."


def article(word):
    return "an" if word[0].lower() in "aeiou" else "a"


def copula_attr(x, y, noun=None):
    """x is a [noun of] y."""
    s = Sentence()
    xs = s.term(x, "nsubj")
    be = s.add("is", "be", "VERB", "ROOT")
    s.link(xs, be)
    if noun is None:
        det = s.add(article(y), article(y), "DET", "det")
        ys = s.term(y, "attr")
        s.link(det, ys)
        s.link(ys, be)
    else:
        det = s.add(article(noun), article(noun), "DET", "det")
        n = s.add(noun, noun, "NOUN", "attr")
        s.link(det, n)
        s.link(n, be)
        of = s.add("of", "of", "ADP", "prep")
        s.link(of, n)
        ys = s.term(y, "pobj")
        s.link(ys, of)
    return s.finish(be)


def verb_object(x, verb, lemma, y, x_mod=None):
    """x verbs y, optionally with x as a compound of `x_mod` (x products include y)."""
    s = Sentence()
    if x_mod is None:
        xs = s.term(x, "nsubj")
        subj = xs
    else:
        xs = s.term(x, "compound")
        subj = s.add(x_mod, x_mod.rstrip("s"), "NOUN", "nsubj")
        s.link(xs, subj)
    v = s.add(verb, lemma, "VERB", "ROOT")
    s.link(subj, v)
    ys = s.term(y, "dobj")
    s.link(ys, v)
    return s.finish(v)


def verb_prep(x, verb, lemma, prep, y, passive=None):
    """x [passive-aux] verb prep y."""
    s = Sentence()
    xs = s.term(x, "nsubjpass" if passive else "nsubj")
    aux = s.add(passive, "be", "AUX", "auxpass") if passive else None
    v = s.add(verb, lemma, "VERB", "ROOT")
    s.link(xs, v)
    if aux is not None:
        s.link(aux, v)
    p = s.add(prep, prep, "ADP", "prep")
    s.link(p, v)
    ys = s.term(y, "pobj")
    s.link(ys, p)
    return s.finish(v)


def coordinated(x, y):
    """x and y were mentioned in the same report."""
    s = Sentence()
    xs = s.term(x, "nsubjpass")
    cc = s.add("and", "and", "CCONJ", "cc")
    s.link(cc, xs)
    ys = s.term(y, "conj")
    s.link(ys, xs)
    aux = s.add("were", "be", "AUX", "auxpass")
    v = s.add("mentioned", "mention", "VERB", "ROOT")
    s.link(xs, v)
    s.link(aux, v)
    p = s.add("in", "in", "ADP", "prep")
    s.link(p, v)
    det = s.add("the", "the", "DET", "det")
    same = s.add("same", "same", "ADJ", "amod")
    rep = s.add("report", "report", "NOUN", "pobj")
    s.link(det, rep)
    s.link(same, rep)
    s.link(rep, p)
    return s.finish(v)


def render(label, a, b, variant):
    """Sentence expressing (a, b, label) with a the ontology-side term."""
    if label == "HYPERNYM":
        return copula_attr(a, b) if variant == 0 else copula_attr(a, b, "type")
    if label == "HYPONYM":
        return verb_object(a, "includes", "include", b) if variant == 0 else copula_attr(b, a, "form")
    if label == "INSTANCE":
        if variant == 0:
            return copula_attr(b, a, "example")
        return verb_object(a, "include", "include", b, x_mod="products")
    if label == "CONCEPT":
        if variant == 0:
            return verb_prep(a, "belongs", "belong", "to", b)
        return verb_prep(a, "classified", "classify", "as", b, passive="is")
    if label == "NONE":
        if variant == 0:
            return coordinated(a, b)
        return verb_prep(a, "discussed", "discuss", "before", b, passive="was")
    raise ValueError(label)


# ---------------------------------------------------------------- embeddings

def unit(v):
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def gauss():
    return [RNG.gauss(0.0, 1.0) for _ in range(DIM)]


DOMAIN = unit(gauss())


def orthogonal_to_domain(v):
    d = sum(a * b for a, b in zip(v, DOMAIN))
    return [a - d * b for a, b in zip(v, DOMAIN)]


def security_vector():
    noise = unit(orthogonal_to_domain(gauss()))
    return [d + 0.6 * n for d, n in zip(DOMAIN, noise)]


def words_of(text):
    out, cur = [], ""
    for ch in text.lower():
        if ch.isalnum():
            cur += ch
        elif cur:
            out.append(cur)
            cur = ""
    if cur:
        out.append(cur)
    return out


def embed(table, text):
    ws = words_of(text)
    v = [0.0] * DIM
    for w in ws:
        v = [a + b for a, b in zip(v, table[w])]
    return [a / len(ws) for a in v]


def cosine(a, b):
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    return sum(x * y for x, y in zip(a, b)) / (na * nb)


# ---------------------------------------------------------------- build

def main():
    edges = []  # (resource, hypernym resource)
    curation = []
    pairs = []  # (a, b, label) as they will appear in the dataset
    for c, (hypers, hypos, insts, junk) in GENERIC.items():
        for h in hypers:
            edges.append((resource(c), resource(h)))
            pairs.append((c, h, "HYPERNYM"))
        for x in hypos:
            edges.append((resource(x), resource(c)))
            pairs.append((c, x, "HYPONYM"))
        for x in insts:
            edges.append((resource(x), resource(c)))
            pairs.append((c, x, "INSTANCE"))
            curation.append((c, norm(x), "INSTANCE"))
        for x in junk:
            edges.append((resource(x), resource(c)))
            pairs.append((c, x, "NONE"))
            curation.append((c, norm(x), "NONE"))
    for p, classes in PRODUCTS.items():
        for k in classes:
            edges.append((resource(norm(p)), resource(k)))
            pairs.append((p, k, "CONCEPT"))
            curation.append((norm(p), k, "CONCEPT"))
    # The worked example's concept; it is not in the seed, so only direct
    # lookups see it.
    edges.append(("Real-time_adaptive_security", "Model"))

    # Seed ontology: upper concepts, Annex A groups and controls, the queried
    # concepts, then catalog entries up to the concept count.
    seed = []
    upper = ["information security concept", "asset", "threat", "safeguard", "control group"]
    for u in upper[1:]:
        seed.append((u, "hypernym", upper[0]))
    for num, title, count in SECTIONS:
        group = f"a.{num} {title}"
        seed.append((group, "hypernym", "control group"))
        for k in range(1, count + 1):
            seed.append((f"control a.{num}.{k}", "hypernym", group))
    for c in GENERIC:
        seed.append((c, "hypernym", "safeguard" if c not in ("malware", "network attack", "spyware")
                     else "threat"))
    for p in PRODUCTS:
        seed.append((norm(p), "instanceOf", "safeguard"))
    concepts = set()
    for s, _, o in seed:
        concepts.update((s, o))
    n = 0
    while len(concepts) < SEED_CONCEPTS:
        n += 1
        label = f"catalog asset {n:03d}"
        seed.append((label, "hypernym", "asset"))
        concepts.add(label)
    assert len(concepts) == SEED_CONCEPTS

    # Corpus sentences: one per pair, alternating template variants per class.
    counters = {}
    articles = {}
    parsed = []
    for a, b, label in pairs:
        v = counters.get(label, 0)
        counters[label] = v + 1
        if label == "NONE" and v % 3 == 2:
            continue  # left out of the corpus: a NULL-path NONE pair
        s = render(label, a, b, v % 2)
        articles.setdefault(a, []).append(s)

    anchor_sentences = [
        copula_attr("information security", "risk management practice"),
        verb_object("information security", "includes", "include", "access control"),
        copula_attr("security control", "safeguard", "type"),
        verb_prep("cyber threat", "belongs", "belong", "to", "threat landscape"),
    ]
    off_topic = [
        copula_attr("building code", "construction regulation"),
        verb_object("building code", "includes", "include", "fire door"),
        copula_attr("pizza oven", "kitchen appliance"),
    ]

    page_sentences = [
        copula_attr("Tessera Wall", "firewall", "example"),
        copula_attr("cloud firewall", "network security system"),
        verb_object("malware", "includes", "include", "fileless malware"),
        verb_prep("Corvus Lock", "belongs", "belong", "to", "password manager"),
        copula_attr("pizza oven", "kitchen appliance"),
        coordinated("firewall", "weather station"),
    ]

    # Embedding table over every word used anywhere in the fixture.
    all_sentences = [s for ss in articles.values() for s in ss] + anchor_sentences + off_topic + page_sentences
    vocab = set()
    for s in all_sentences:
        vocab.update(words_of(s.text()))
    vocab.update(["information", "security"])
    table = {}
    off = set(OFF_WORDS)
    func = set(FUNCTION_WORDS)
    for w in sorted(vocab):
        if w in off:
            table[w] = unit(orthogonal_to_domain(gauss()))
        elif w in func:
            table[w] = [0.15 * x for x in unit(gauss())]
        else:
            table[w] = security_vector()

    # Sanity margins for the thresholds the pipeline uses.
    anchor_text = " ".join(s.text() for s in anchor_sentences)
    anchor_vec = embed(table, anchor_text)
    for title, ss in articles.items():
        sim = cosine(embed(table, " ".join(s.text() for s in ss)), anchor_vec)
        assert sim > 0.40, (title, sim)
    off_sim = cosine(embed(table, " ".join(s.text() for s in off_topic)), anchor_vec)
    assert off_sim < 0.15, off_sim
    domain = embed(table, "information security")
    for chunk in ["tessera wall", "firewall", "cloud firewall", "password manager", "corvus lock"]:
        assert cosine(embed(table, chunk), domain) > 0.45, chunk
    for chunk in ["pizza oven", "kitchen appliance", "weather station"]:
        assert cosine(embed(table, chunk), domain) < 0.25, chunk

    # ------------------------------------------------------------ write
    def write(name, text):
        with open(os.path.join(HERE, name), "w", encoding="utf-8", newline="\n") as f:
            f.write(text)

    write("seed.tsv", "".join(f"{s}\t{p}\t{o}\n" for s, p, o in seed))
    write("hypernyms.tsv", "# resource\thypernym resource\n" +
          "".join(f"{r}\t{h}\n" for r, h in edges))
    write("curation.tsv", "# a\tb\tnew label\n" + "".join(f"{a}\t{b}\t{l}\n" for a, b, l in curation))

    def page_xml(title, sentences):
        body = "\n".join(s.text() for s in sentences)
        return (f"  <page>\n    <title>{title}</title>\n    <ns>0</ns>\n"
                f"    <revision><text xml:space=\"preserve\">{body}</text></revision>\n  </page>\n")

    dump = "<mediawiki>\n"
    dump += page_xml("Information security", anchor_sentences)
    for title in sorted(articles, key=str.lower):
        dump += page_xml(cap(title), articles[title])
    dump += page_xml("Building code", off_topic)
    dump += page_xml("Pizza", [copula_attr("pizza oven", "kitchen appliance")])
    dump += "</mediawiki>\n"
    write("dump.xml", dump)

    conll = []
    seen = set()
    k = 0
    for s in all_sentences:
        if s.text() in seen:
            continue
        seen.add(s.text())
        k += 1
        for i, (surface, lemma, pos, dep, head) in enumerate(s.toks):
            conll.append(f"p{k}\t{i}\t{surface}\t{lemma}\t{pos}\t{dep}\t{head}\n")
        conll.append("\n")
    write("parses.conll", "".join(conll))

    paras = [" ".join(s.text() for s in page_sentences[:3]), " ".join(s.text() for s in page_sentences[3:])]
    write("page.html", "<!DOCTYPE html>\n<html><head><title>Perimeter defence notes</title>\n"
          "<script>var tracking = \"<p>ignored</p>\";</script></head>\n<body>\n"
          "<nav><p>Home | Products | Contact</p></nav>\n"
          + "".join(f"<p>{p}</p>\n" for p in paras) +
          "<footer><p>Copyright notice.</p></footer>\n</body></html>\n")

    write("embeddings.txt", f"{len(table)} {DIM}\n" + "".join(
        w + " " + " ".join(f"{x:.6f}" for x in v) + "\n" for w, v in sorted(table.items())))

    calib = [("firewall", "packet filter", 1), ("malware", "ransomware", 1),
             ("encryption", "disk encryption", 1), ("tessera wall", "firewall", 1),
             ("access control", "security control", 1), ("spyware", "keylogger", 1),
             ("pizza oven", "kitchen appliance", 0), ("firewall", "weather station", 0),
             ("coffee", "football match", 0), ("malware", "holiday trip", 0),
             ("river boat", "painting lesson", 0), ("encryption", "tomato sauce", 0)]
    write("calibration.tsv", "".join(f"{a}\t{b}\t{l}\n" for a, b, l in calib))

    write("pipeline.conf", """# End-to-end fixture pipeline. Relative paths resolve against this file;
# outputs go under work_dir (pass --work-dir) and the endpoint is supplied on
# the command line.
seed = 7
ontology = seed.tsv
curation = curation.tsv
none_fraction = 0.5
holdout_fraction = 0.2
dump = dump.xml
anchor = Information security
corpus_threshold = 0.27
doc_similarity = embedding
embedding = table:embeddings.txt
parser = preparsed:parses.conll
hidden_dim = 16
ffn_input_dim = 16
num_layers = 1
embedding_dropout = 0.1
hidden_dropout = 0.1
epochs = 40
learning_rate = 0.01
weight_decay = 0.0001
page = page.html
mode = review
calibration = calibration.tsv
""")


if __name__ == "__main__":
    main()
