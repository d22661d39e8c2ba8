#!/usr/bin/env python3
"""Regenerate the committed fixtures under fixtures/.

Produces:
  fixtures/taxonomy.tsv      123 labels with top-level groups
  fixtures/corpus.csv        50 synthetic records covering the edge cases
  fixtures/cache/<provider>/ recorded provider responses for offline runs

The corpus is synthetic but shaped like the real shared-task export:
most rows carry DOIs, a block at the end does not (some of those are
resolvable by title search, some are not), a couple of abstracts blow
the token budget, and a few rows carry LaTeX or accented characters.

Deterministic: rerunning writes byte-identical files.
"""
from __future__ import annotations

import csv
import json
import shutil
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from forc.normalize import normalize_title
from forc.providers import doi_cache_key, search_cache_key

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"

FIXED_TIMESTAMP = "2026-08-01T00:00:00+00:00"

# ---------------------------------------------------------------------------
# Taxonomy: 123 labels across 9 top-level groups
# ---------------------------------------------------------------------------

TAXONOMY: dict[str, list[str]] = {
    "Physical Sciences and Mathematics": [
        "Mathematics", "Algebra", "Analysis", "Applied Mathematics",
        "Geometry and Topology", "Logic and Foundations", "Number Theory",
        "Probability", "Statistics", "Dynamical Systems",
        "Discrete Mathematics and Combinatorics",
        "Physics", "Astrophysics and Astronomy",
        "Atomic Molecular and Optical Physics", "Condensed Matter Physics",
        "Cosmology Relativity and Gravity", "Elementary Particles and Fields",
        "Engineering Physics", "Fluid Dynamics", "Nuclear Physics",
        "Optics and Photonics", "Plasma and Beam Physics", "Quantum Physics",
        "Statistical and Nonlinear Physics",
        "Chemistry", "Analytical Chemistry", "Inorganic Chemistry",
        "Materials Chemistry", "Organic Chemistry", "Physical Chemistry",
        "Polymer Chemistry",
        "Earth Sciences", "Geology", "Geophysics and Seismology",
        "Oceanography and Atmospheric Sciences",
        "Computer Sciences", "Artificial Intelligence and Robotics",
        "Databases and Information Systems", "Information Security",
        "Numerical Analysis and Scientific Computing", "Software Engineering",
        "Theory and Algorithms",
    ],
    "Life Sciences": [
        "Biology", "Biochemistry", "Bioinformatics", "Biophysics",
        "Biotechnology", "Botany", "Cell Biology",
        "Ecology and Evolutionary Biology", "Genetics and Genomics",
        "Immunology", "Marine Biology", "Microbiology", "Molecular Biology",
        "Neuroscience and Neurobiology", "Physiology", "Systems Biology",
        "Zoology", "Agricultural Science", "Food Science", "Forest Sciences",
    ],
    "Medicine and Health Sciences": [
        "Medicine", "Anesthesiology", "Cardiology", "Dentistry",
        "Epidemiology", "Medical Genetics", "Mental and Social Health",
        "Nursing", "Oncology", "Pediatrics", "Pharmacology and Toxicology",
        "Public Health", "Radiology and Medical Imaging", "Surgery",
        "Veterinary Medicine",
    ],
    "Engineering": [
        "Engineering", "Aerospace Engineering", "Automotive Engineering",
        "Bioengineering and Biomedical Engineering", "Chemical Engineering",
        "Civil and Environmental Engineering",
        "Electrical and Computer Engineering", "Energy Systems Engineering",
        "Materials Science and Engineering", "Mechanical Engineering",
        "Mining and Metallurgical Engineering", "Nuclear Engineering",
        "Operations Research and Industrial Engineering", "Systems Engineering",
    ],
    "Social and Behavioral Sciences": [
        "Anthropology", "Archaeology", "Communication Studies", "Criminology",
        "Demography", "Economics", "Geography", "International Relations",
        "Linguistics", "Political Science", "Psychology",
        "Science and Technology Studies", "Sociology",
        "Urban Studies and Planning",
    ],
    "Arts and Humanities": [
        "Art History", "Classics", "History", "Literature", "Music",
        "Philosophy", "Religious Studies", "Theatre and Performance Studies",
        "Visual Arts", "Cultural Studies",
    ],
    "Business": ["Accounting", "Business Administration", "Finance", "Marketing"],
    "Law": ["Law", "Legal Studies"],
    "Education": ["Education", "Educational Psychology"],
}

FOS_BY_GROUP = {
    "Physical Sciences and Mathematics": "Physics",
    "Life Sciences": "Biology",
    "Medicine and Health Sciences": "Medicine",
    "Engineering": "Engineering",
    "Social and Behavioral Sciences": "Sociology",
    "Arts and Humanities": "Art",
    "Business": "Business",
    "Law": "Law",
    "Education": "Education",
}

_STOPWORDS = {
    "a", "an", "the", "of", "in", "on", "for", "and", "with", "under",
    "at", "to", "by", "from", "across", "against", "during", "as", "via",
}


def long_abstract(topic: str, sentences: int) -> str:
    parts = []
    for i in range(1, sentences + 1):
        parts.append(
            f"Section {i} extends the analysis of {topic} with additional "
            f"controls, replication cohorts, and robustness checks over "
            f"configuration {i}."
        )
    return " ".join(parts)


# Each row: (id, title, abstract, label, doi, month, year, publisher, author, url)
ROWS = [
    ("fx0001", "Emergent Superconductivity in Twisted Bilayer Graphene",
     "We report superconducting domes in twisted bilayer graphene near the magic angle. "
     "Transport measurements reveal a correlated insulating state at half filling.",
     "Condensed Matter Physics", "10.5555/fx0001", "3", "2021", "Example Press",
     "Rivera, Dana", "https://example.org/papers/fx0001"),
    ("fx0002", "Bounded Gaps Between Primes in Short Intervals",
     "We refine sieve estimates to show that bounded gaps between consecutive primes "
     "persist in short intervals. The argument combines weighted sieves with "
     "exponential sum bounds.",
     "Number Theory", "10.5555/fx0002", "11", "2019", "Example Press",
     "Okafor, Chidi", ""),
    ("fx0003", "A Catalog of Fast Radio Bursts from a Wide-Field Survey",
     "We present four hundred new fast radio bursts detected in a wide-field radio "
     "survey, doubling the known population and constraining repeater fractions.",
     "Astrophysics and Astronomy", "10.5555/fx0003", "7", "2022", "Skyline Publishing",
     "Nguyen, Alice", ""),
    ("fx0004", "Sample-Efficient Reinforcement Learning with World Models",
     "A latent world model trained on pixels reaches human-level control on a suite "
     "of benchmark tasks using an order of magnitude fewer environment steps.",
     "Artificial Intelligence and Robotics", "10.5555/fx0004", "13", "2023",
     "Example Press", "Babic, Mila", ""),
    ("fx0005", "Photocatalytic C-H Activation under Visible Light",
     "Visible light photocatalysis enables direct functionalization of unactivated "
     "C-H bonds at room temperature with broad substrate scope.",
     "Organic Chemistry", "10.5555/fx0005", "5", "2020", "Chemistry House",
     "Sato, Kenji", ""),
    ("fx0006", "Range Shifts of Alpine Plant Communities under Warming",
     "Resurveys of alpine summits show upslope migration of plant communities over "
     "four decades, with thermophilization strongest on calcareous bedrock.",
     "Ecology and Evolutionary Biology", "10.5555/fx0006", "6", "2018",
     "Field Journals", "Lindqvist, Sara", ""),
    ("fx0007", r"On $\alpha$-decay of {Heavy} Nuclei",
     "Alpha decay half-lives of superheavy isotopes are computed within a "
     "microscopic cluster model and compared against recent measurements.",
     "Nuclear Physics", "10.5555/fx0007", "2", "2019", "Example Press",
     "Weber, Hanna", ""),
    ("fx0008", "Monetary Policy Transmission in Emerging Markets",
     "Using high-frequency identification we trace the pass-through of policy rate "
     "surprises to credit and exchange rates across twelve emerging economies.",
     "Economics", "10.5555/fx0008", "9", "2021", "Macro Review Press",
     "Delgado, Maria", ""),
    ("fx0009", "Error Mitigation for Near-Term Quantum Processors",
     "Zero-noise extrapolation and probabilistic error cancellation are combined "
     "into a calibration-light mitigation pipeline for shallow circuits.",
     "Quantum Physics", "https://doi.org/10.5555/fx0009", "4", "2022",
     "Example Press", "Shen, Wei", ""),
    ("fx0010", "Vaccine Effectiveness against Seasonal Influenza in Older Adults",
     "A test-negative design across three seasons estimates moderate but consistent "
     "protection against hospitalization in adults over sixty-five.",
     "Epidemiology", "10.5555/fx0010", "10", "2020", "Health Letters",
     "Fontaine, Claire", ""),
    ("fx0011", "Solution Processing of Perovskite Thin Films",
     "Antisolvent engineering yields pinhole-free perovskite films with grain sizes "
     "above one micron and reproducible photovoltaic efficiencies.",
     "Materials Chemistry", "10.5555/fx0011", "8", "2021", "Chemistry House",
     "Novak, Petra", ""),
    ("fx0012", "Tone Sandhi Variation across Min Dialects",
     "Acoustic data from eleven Min varieties document gradient sandhi application.\n"
     "Mixed-effects models separate lexical from phrasal conditioning.",
     "Linguistics", "10.5555/fx0012", "1", "2019", "Field Journals",
     "Huang, Lian", ""),
    ("fx0013", "Static Analysis of Concurrency Bugs at Scale",
     "A compositional happens-before analysis surfaces data races in large service "
     "codebases with a false positive rate under ten percent.",
     "Software Engineering", "10.5555/fx0013", "6", "2023", "Example Press",
     "Ivanov, Pavel", ""),
    ("fx0014", "Circulating Tumor DNA as a Biomarker for Relapse Detection",
     "Serial plasma sequencing detects molecular relapse months before imaging in a "
     "prospective cohort of resected colorectal cancer patients.",
     "Oncology", "10.5555/fx0014", "12", "2022", "Health Letters",
     "Rossi, Giulia", ""),
    ("fx0015", "Cortical Dynamics during Naturalistic Movie Viewing",
     long_abstract("cortical population dynamics", 120),
     "Neuroscience and Neurobiology", "10.5555/fx0015", "3", "2021",
     "Field Journals", "Martins, Rui", ""),
    ("fx0016", "Nonparametric Regression with Measurement Error",
     "Deconvolution estimators are extended to heteroscedastic error with unknown "
     "distribution, with minimax rates and a practical bandwidth selector.",
     "Statistics", "10.5555/fx0016", "5", "2018", "Example Press",
     "Cohen, Ruth", ""),
    ("fx0017", "Zircon Geochronology of an Archean Greenstone Belt",
     "Uranium-lead ages from detrital zircons constrain deposition of the belt to "
     "the Neoarchean and record two distinct magmatic pulses.",
     "Geology", "10.5555/fx0017", "7", "2019", "Skyline Publishing",
     "Mbeki, Thandiwe", ""),
    ("fx0018", "Electoral Volatility and Party System Change in Europe",
     "Panel data from twenty-eight democracies link economic shocks to the entry of "
     "challenger parties rather than to vote switching among incumbents.",
     "Political Science", "10.5555/fx0018", "2", "2020", "Macro Review Press",
     "Kowalski, Jan", ""),
    ("fx0019", "Topology Optimization of Lattice Structures for Additive Manufacturing",
     "A multiscale scheme couples homogenized lattice properties with build "
     "constraints, cutting compliance by a third at equal mass.",
     "Mechanical Engineering", "10.5555/fx0019", "9", "2022", "Example Press",
     "Johansson, Erik", ""),
    ("fx0020", "Grounding and the Unity of Metaphysical Explanation",
     "The paper defends a unified account of grounding on which metaphysical "
     "explanation inherits its structure from constitutive determination.",
     "Philosophy", "10.5555/fx0020", "4", "2018", "Humanities Quarterly",
     "O'Brien, Niamh", ""),
    ("fx0021", "Graph Neural Networks for Protein Function Prediction",
     "Residue-level message passing over predicted structures improves function "
     "annotation transfer to remote homologs.",
     "Bioinformatics", "10.5555/fx0021", "11", "2023", "Field Journals",
     "Anand, Priya", ""),
    ("fx0022", "Turbulent Drag Reduction by Superhydrophobic Surfaces",
     "Direct numerical simulations quantify slip-length thresholds for sustained "
     "drag reduction in channel flow at friction Reynolds numbers to one thousand.",
     "Fluid Dynamics", "10.5555/fx0022", "8", "2020", "Example Press",
     "Moreau, Luc", ""),
    ("fx0023", "Adaptive Indexing for Cloud-Native Analytical Engines",
     long_abstract("adaptive indexing under elastic workloads", 110),
     "Databases and Information Systems", "10.5555/fx0023", "1", "2024",
     "Example Press", "Tanaka, Sho", ""),
    ("fx0024", "T Cell Exhaustion Signatures in Chronic Infection",
     "Single-cell profiling identifies a progenitor exhausted population whose "
     "frequency predicts response to checkpoint blockade.",
     "Immunology", "10.5555/fx0024", "6", "2021", "Health Letters",
     "Schmidt, Lena", ""),
    ("fx0025", "Liquidity Premia in Corporate Bond Markets",
     "Transaction-level data show that liquidity premia widen asymmetrically in "
     "downturns, concentrated in speculative-grade issues.",
     "Finance", "10.5555/fx0025", "10", "2019", "Macro Review Press",
     "Banerjee, Arjun", ""),
    ("fx0026", "Integrated Frequency Combs on Thin-Film Lithium Niobate",
     "Dispersion-engineered microresonators generate octave-spanning combs with "
     "electro-optic tunability on a single chip.",
     "Optics and Photonics", "10.5555/fx0026", "3", "2023", "Example Press",
     "Petrov, Ana", ""),
    ("fx0027", "Residential Segregation and Intergenerational Mobility",
     "Linking census tracts to tax records, we estimate that childhood exposure to "
     "segregated neighborhoods lowers adult earnings rank.",
     "Sociology", "10.5555/fx0027", "5", "2020", "Macro Review Press",
     "Washington, Leah", ""),
    ("fx0028", "Single-Cell Mass Spectrometry with Nanoelectrospray Probes",
     "A pulled-capillary probe samples subpicoliter volumes from live cells for "
     "untargeted metabolomics with attomole sensitivity.",
     "Analytical Chemistry", "10.5555/fx0028", "7", "2022", "Chemistry House",
     "Silva, Marta", ""),
    ("fx0029", "Grain Markets and Famine Relief in Qing China",
     "Provincial granary records show state purchases stabilized prices during "
     "harvest failures well into the nineteenth century.",
     "History", "10.5555/fx0029", "2", "2018", "Humanities Quarterly",
     "Zhang, Wei", ""),
    ("fx0030", "Seismic Retrofitting of Reinforced Concrete Bridges",
     "Shake-table tests of column jacketing schemes support displacement-based "
     "design rules for retrofit of pre-1975 bridge stock.",
     "Civil and Environmental Engineering", "10.5555/fx0030", "9", "2021",
     "Example Press", "Castro, Diego", ""),
    ("fx0031", "Mixing Times for Random Walks on Dynamic Graphs",
     "",
     "Probability", "10.5555/fx0031", "4", "2019", "Example Press",
     "Szabo, Eva", ""),
    ("fx0032", "Heat Waves and Emergency Department Visits in Coastal Cities",
     "Distributed-lag models across fourteen cities quantify excess visits during "
     "compound heat and humidity events.",
     "Public Health", "10.5555/fx0032", "8", "2023", "Health Letters",
     "Adeyemi, Bola", ""),
    ("fx0033", "Exile and Memory in the Novels of José Saramago",
     "Close readings trace how displacement reorganizes narrative time in three "
     "late novels, against the backdrop of Iberian historiography.",
     "Literature", "10.5555/fx0033", "11", "2020", "Humanities Quarterly",
     "Pereira, Inês", ""),
    ("fx0034", "Ambient Noise Tomography of a Subduction Zone Forearc",
     "Cross-correlation of seafloor noise yields shear velocity maps that image "
     "the locked section of the megathrust.",
     "Geophysics and Seismology", "10.5555/fx0034", "6", "2022",
     "Skyline Publishing", "Ito, Haruka", ""),
    ("fx0035", "Attribution Modeling for Multi-Channel Advertising",
     "A causal attribution framework reallocates budget across channels and lifts "
     "conversion per dollar in two field experiments.",
     "Marketing", "10.5555/fx0035", "1", "2021", "Macro Review Press",
     "Dubois, Paul", ""),
    ("fx0036", "Long-Read Assembly of Structural Variants in Maize",
     "Haplotype-resolved assemblies reveal pervasive presence-absence variation "
     "affecting stress response gene families.",
     "Genetics and Genomics", "10.5555/fx0036", "5", "2023", "Field Journals",
     "Gonzalez, Lucia", ""),
    ("fx0037", "Streaming Lower Bounds via Communication Complexity",
     "A reduction from multiparty pointer jumping tightens space lower bounds for "
     "frequency moment estimation in the turnstile model.",
     "Theory and Algorithms", "10.5555/fx0037", "10", "2018", "Example Press",
     "Feldman, Noa", ""),
    ("fx0038", "Kinetics of Ozone Decomposition on Metal Oxide Surfaces",
     "Temperature-programmed experiments resolve the rate-limiting step of ozone "
     "decomposition over manganese oxide catalysts.",
     "", "10.5555/fx0038", "3", "2019", "Chemistry House",
     "Kim, Minjun", ""),
    ("fx0039", "Working Memory Training and Far Transfer Effects",
     "A preregistered meta-analysis finds near-transfer gains but no reliable far "
     "transfer to fluid intelligence measures.",
     "Psychology", "10.5555/fx0039", "7", "2020", "Field Journals",
     "Bauer, Franz", ""),
    ("fx0040", "Formative Assessment Practices in Large Lecture Courses",
     "Weekly low-stakes quizzing with targeted feedback raises exam performance "
     "most for students entering with weak preparation.",
     "Education", "10.5555/fx0040", "12", "2021", "Example Press",
     "Larsen, Mette", ""),
    # --- rows without DOIs -------------------------------------------------
    ("fx0041", "Gravitational Lensing Constraints on Dark Matter Substructure",
     "Flux-ratio anomalies in quadruply imaged quasars bound the subhalo mass "
     "function below a billion solar masses.",
     "Cosmology Relativity and Gravity", "", "2", "2022", "Skyline Publishing",
     "Almeida, Joao", ""),
    ("fx0042", r"Spectral {Gaps} in $\beta$-Ensembles",
     "We establish rigidity and gap universality for general beta ensembles with "
     "smooth potentials at the optimal scale.",
     "Analysis", "", "6", "2020", "Example Press",
     "Volkov, Dmitri", ""),
    ("fx0043", "Horizontal Gene Transfer in Soil Bacterial Communities",
     "Metagenomic time series reveal seasonal pulses of plasmid-borne resistance "
     "genes in agricultural soils.",
     "Microbiology", "", "9", "2021", "Field Journals",
     "Okonkwo, Ada", ""),
    ("fx0044", "Pigment Trade Networks in Renaissance Venice",
     "Customs ledgers and workshop inventories reconstruct the supply chains that "
     "brought ultramarine and vermilion to Venetian painters.",
     "Art History", "", "4", "2018", "Humanities Quarterly",
     "Bianchi, Chiara", ""),
    ("fx0045", "Audit Quality and Goodwill Impairment Timing",
     "Impairment delays concentrate among clients of auditors with low industry "
     "specialization, consistent with strategic discretion.",
     "Accounting", "", "8", "2019", "Macro Review Press",
     "Muller, Hans", ""),
    ("fx0046", "Echolocation Click Repertoires of Harbor Porpoises",
     "Passive acoustic tags capture context-dependent click trains during foraging "
     "and social interactions in coastal waters.",
     "Zoology", "", "5", "2023", "Field Journals",
     "Eriksen, Kari", ""),
    ("fx0047", "Cohort Fertility Decline in East Asia",
     "Completed fertility falls below replacement for all cohorts born after 1970, "
     "driven by delayed first births rather than parity progression.",
     "Demography", "", "10", "2022", "Macro Review Press",
     "Park, Jisoo", ""),
    ("fx0048", "Algorithmic Decision-Making and Due Process",
     "Doctrinal analysis shows that automated benefit denials strain existing "
     "notice and hearing requirements.",
     "Law", "", "1", "2021", "Humanities Quarterly",
     "Hassan, Omar", ""),
    ("fx0049", "Microtiming in Afro-Cuban Percussion Ensembles",
     "Onset-level analysis of ensemble recordings quantifies systematic microtiming "
     "deviations that distinguish rumba styles.",
     "Music", "", "7", "2020", "Humanities Quarterly",
     "Valdes, Camila", ""),
    ("fx0050", "Nurse Staffing Ratios and Patient Outcomes in Intensive Care",
     "A multicenter cohort links lower nurse-to-patient ratios to increased "
     "failure-to-rescue rates after surgical admission.",
     "Nursing", "", "11", "2023", "Health Letters",
     "Doyle, Aoife", ""),
]

# Rows that resolve by title search: record id -> resolved DOI
RESOLVABLE = {
    "fx0041": "10.5555/fx0041r",
    "fx0042": "10.5555/fx0042r",
    "fx0043": "10.5555/fx0043r",
}
# Search returns one hit whose title does not match
LOW_SIMILARITY = {"fx0046": "Sponge Microbiome Assembly on Tropical Reefs"}
# Search hit matches but carries no DOI
HIT_WITHOUT_DOI = {"fx0047"}

OPENALEX_404 = {"10.5555/fx0003"}
S2AG_404 = {"10.5555/fx0014", "10.5555/fx0021"}
CROSSREF_404 = {"10.5555/fx0014"}
S2AG_NULL_FIELDS = {"10.5555/fx0005"}
CROSSREF_NO_SUBJECT = {"10.5555/fx0008"}
OPENALEX_DUP_CONCEPTS = {"10.5555/fx0011"}


def content_words(title: str, limit: int) -> list[str]:
    words = []
    for word in normalize_title(title).split():
        clean = word.strip(",.:;()").strip()
        if clean and clean.lower() not in _STOPWORDS:
            words.append(clean[0].upper() + clean[1:])
        if len(words) == limit:
            break
    return words


def label_group() -> dict[str, str]:
    return {label: group for group, labels in TAXONOMY.items() for label in labels}


def openalex_body(row, doi: str, group_of: dict[str, str]) -> dict:
    rid, title, _, label, *_ = row
    label = label or "Chemistry"
    concepts = content_words(title, 3)
    if doi in OPENALEX_DUP_CONCEPTS:
        concepts = [concepts[0], concepts[0]] + concepts[1:]
    work_number = rid.removeprefix("fx").lstrip("0") or "0"
    return {
        "id": f"https://openalex.org/W91{int(work_number):06d}",
        "doi": f"https://doi.org/{doi}",
        "display_name": normalize_title(title),
        "topics": [
            {
                "display_name": label,
                "subfield": {"display_name": f"Applied {label}"},
                "field": {"display_name": group_of.get(label, label)},
            }
        ],
        "concepts": [{"display_name": c, "level": 2} for c in concepts],
        "keywords": [{"display_name": " ".join(content_words(title, 2))}],
        "ids": {
            "openalex": f"https://openalex.org/W91{int(work_number):06d}",
            "doi": f"https://doi.org/{doi}",
        },
    }


def s2ag_body(row, doi: str, group_of: dict[str, str]) -> dict:
    rid, title, _, label, *_ = row
    fos = FOS_BY_GROUP.get(group_of.get(label, ""), "Computer Science")
    body = {
        "paperId": f"s2-{rid}",
        "title": normalize_title(title),
        "externalIds": {"DOI": doi},
        "fieldsOfStudy": [fos],
        "s2FieldsOfStudy": [{"category": fos, "source": "external"}],
    }
    if doi in S2AG_NULL_FIELDS:
        body["fieldsOfStudy"] = None
        body["s2FieldsOfStudy"] = []
    return body


def crossref_body(row, doi: str) -> dict:
    _, title, _, label, *_rest = row
    publisher = row[7]
    label = label or "Chemistry"
    message = {
        "DOI": doi,
        "type": "journal-article",
        "title": [normalize_title(title)],
        "container-title": [f"Journal of {label}"],
        "publisher": publisher,
        "subject": [label, "Multidisciplinary"],
    }
    if doi in CROSSREF_NO_SUBJECT:
        del message["subject"]
    return {"status": "ok", "message-type": "work", "message": message}


def write_cache_entry(provider: str, key: str, body: dict | str, status: int = 200) -> None:
    directory = FIXTURES / "cache" / provider
    directory.mkdir(parents=True, exist_ok=True)
    payload = body if isinstance(body, str) else json.dumps(body, indent=1, ensure_ascii=False)
    (directory / f"{key}.json").write_text(payload + "\n", encoding="utf-8")
    if status != 200:
        (directory / f"{key}.meta.json").write_text(
            json.dumps({"status": status, "fetched_at": FIXED_TIMESTAMP}) + "\n",
            encoding="utf-8",
        )


def search_body(results: list[dict]) -> dict:
    return {"meta": {"count": len(results), "per_page": 5}, "results": results}


def main() -> None:
    group_of = label_group()
    all_labels = [label for labels in TAXONOMY.values() for label in labels]
    assert len(all_labels) == 123, f"taxonomy has {len(all_labels)} labels"
    assert len(set(all_labels)) == 123, "taxonomy labels must be unique"
    assert len(ROWS) == 50, f"corpus has {len(ROWS)} rows"

    FIXTURES.mkdir(exist_ok=True)
    if (FIXTURES / "cache").exists():
        shutil.rmtree(FIXTURES / "cache")

    with open(FIXTURES / "taxonomy.tsv", "w", encoding="utf-8") as handle:
        for group, labels in TAXONOMY.items():
            for label in labels:
                handle.write(f"{label}\t{group}\n")

    header = [
        "id", "title", "abstract", "author", "doi", "url",
        "publication month", "publication year", "publisher", "label",
    ]
    with open(FIXTURES / "corpus.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for rid, title, abstract, label, doi, month, year, publisher, author, url in ROWS:
            writer.writerow(
                [rid, title, abstract, author, doi, url, month, year, publisher, label]
            )

    for row in ROWS:
        rid, title, _, label, doi_cell, *_ = row
        doi = doi_cell.removeprefix("https://doi.org/") if doi_cell else RESOLVABLE.get(rid)
        if doi is None:
            continue
        key = doi_cache_key(doi)
        if doi in OPENALEX_404:
            write_cache_entry(
                "openalex", key,
                {"error": "HTTP 404", "message": "work not found"}, status=404,
            )
        else:
            write_cache_entry("openalex", key, openalex_body(row, doi, group_of))
        if doi in S2AG_404:
            write_cache_entry(
                "s2ag", key, {"error": "Paper not found"}, status=404,
            )
        else:
            write_cache_entry("s2ag", key, s2ag_body(row, doi, group_of))
        if doi in CROSSREF_404:
            write_cache_entry("crossref", key, "Resource not found.", status=404)
        else:
            write_cache_entry("crossref", key, crossref_body(row, doi))

    for row in ROWS:
        rid, title, *_ = row
        if row[4]:
            continue  # has a DOI, no search needed
        query = normalize_title(title)
        key = search_cache_key(query)
        if rid in RESOLVABLE:
            hit = {
                "id": f"https://openalex.org/W92{int(rid.removeprefix('fx')):06d}",
                "title": query,
                "display_name": query,
                "doi": f"https://doi.org/{RESOLVABLE[rid]}",
            }
            write_cache_entry("openalex", key, search_body([hit]))
        elif rid in LOW_SIMILARITY:
            hit = {
                "id": "https://openalex.org/W920000xx",
                "title": LOW_SIMILARITY[rid],
                "display_name": LOW_SIMILARITY[rid],
                "doi": "https://doi.org/10.5555/unrelated",
            }
            write_cache_entry("openalex", key, search_body([hit]))
        elif rid in HIT_WITHOUT_DOI:
            hit = {
                "id": "https://openalex.org/W920000yy",
                "title": query,
                "display_name": query,
                "doi": None,
            }
            write_cache_entry("openalex", key, search_body([hit]))
        else:
            write_cache_entry("openalex", key, search_body([]))

    n_cache = sum(1 for _ in (FIXTURES / "cache").rglob("*.json"))
    print(f"wrote taxonomy ({len(all_labels)} labels), corpus ({len(ROWS)} rows), "
          f"{n_cache} cache files")


if __name__ == "__main__":
    main()
