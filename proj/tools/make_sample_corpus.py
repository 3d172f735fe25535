#!/usr/bin/env python3
"""Generate the bundled sample corpus and DOI fixture.

The corpus is synthetic biomedical-style text: each paper mixes a primary and
a secondary topic vocabulary with a few paper-specific entity names (genes,
compounds, cohorts) that recur between its abstract and body, the way real
papers repeat their subject. Output is deterministic for a given seed.

    python3 tools/make_sample_corpus.py --out data/sample_corpus.jsonl \
        --fixture data/doi_fixture.jsonl
"""

import argparse
import json
import random

TOPICS = {
    "oncology": "tumor tumors cancer carcinoma metastasis malignant chemotherapy oncogene proliferation apoptosis "
    "biopsy lesion neoplasm staging remission radiotherapy invasion angiogenesis",
    "cardiology": "cardiac heart myocardial infarction arrhythmia ventricular atrial coronary hypertension "
    "ischemia valve artery stenosis fibrillation ejection thrombosis vascular",
    "neurology": "neuronal neurons brain cortex synaptic hippocampus dementia cognitive seizure epilepsy "
    "axon dopamine glial neurodegeneration stroke cerebral plasticity",
    "immunology": "immune antibody antigen lymphocyte macrophage cytokine inflammation interleukin tcell "
    "vaccine autoimmune innate adaptive receptor antibodies inflammatory complement",
    "infectious": "viral virus bacterial infection pathogen antibiotic resistance transmission host "
    "replication outbreak strain sepsis microbial antimicrobial virulence epidemic",
    "genomics": "genome sequencing variant mutation allele genotype transcription expression locus "
    "methylation chromatin exome polymorphism heritability transcriptome splicing enhancer",
    "metabolism": "glucose insulin obesity diabetes lipid metabolic adipose mitochondrial glycolysis "
    "fatty cholesterol hepatic ketone oxidative energy diet",
    "respiratory": "lung pulmonary airway asthma bronchial respiratory ventilation alveolar fibrosis "
    "emphysema oxygen inhaled sputum spirometry pneumonia cough",
    "nephrology": "kidney renal glomerular nephropathy dialysis creatinine proteinuria tubular filtration "
    "nephron urinary albuminuria transplant electrolyte podocyte uremic",
    "ecology": "species habitat population biodiversity ecosystem predator forest climate migration "
    "abundance conservation soil plant pollinator vegetation wetland",
    "epidemiology": "cohort incidence prevalence mortality risk exposure confounding odds registry "
    "population surveillance hazard longitudinal survey socioeconomic screening",
    "pharmacology": "drug dose pharmacokinetic clearance toxicity compound inhibitor agonist antagonist "
    "bioavailability metabolite plasma efficacy trial placebo formulation",
    "imaging": "imaging mri tomography ultrasound contrast segmentation scan radiologic resolution "
    "voxel diffusion perfusion reconstruction radiograph modality artifact",
    "microbiome": "microbiome gut microbiota commensal flora probiotic dysbiosis colonization fecal "
    "taxa metagenomic intestinal bacteroides firmicutes fermentation mucosal",
    "stemcells": "stem pluripotent differentiation progenitor organoid reprogramming embryonic lineage "
    "niche renewal mesenchymal hematopoietic regeneration scaffold engraftment",
    "endocrinology": "hormone thyroid cortisol estrogen testosterone pituitary adrenal endocrine "
    "secretion receptor gland puberty menopause growth feedback",
    "dermatology": "skin dermal keratinocyte melanoma psoriasis eczema wound epidermal pigmentation "
    "lesions itch barrier follicle sebaceous scar ulcer",
    "ophthalmology": "retina retinal visual ocular glaucoma cornea macular lens photoreceptor intraocular "
    "myopia optic vision cataract choroid eye",
    "orthopedics": "bone fracture joint cartilage osteoporosis tendon ligament spine skeletal osteoarthritis "
    "mineral density implant arthroplasty muscle gait",
    "psychiatry": "depression anxiety schizophrenia bipolar psychiatric mood psychotic antidepressant "
    "suicide trauma stress behavioral therapy disorder symptoms",
    "pediatrics": "infant neonatal children pediatric preterm birth childhood adolescent maternal "
    "breastfeeding growth developmental gestational newborn perinatal",
    "nutrition": "dietary nutrient vitamin intake protein fiber supplementation micronutrient "
    "calorie food consumption iron zinc malnutrition appetite",
    "structural": "protein structure crystal folding binding domain conformation ligand enzyme "
    "catalytic residue kinase substrate allosteric peptide helix",
    "bioinformatics": "algorithm computational database annotation alignment clustering prediction "
    "network pipeline software classifier benchmark dataset feature model",
}

METHODS = [
    "a randomized controlled trial", "a retrospective cohort analysis", "single-cell RNA sequencing",
    "a mouse knockout model", "mass spectrometry", "a cross-sectional survey", "confocal microscopy",
    "CRISPR screening", "a meta-analysis of published studies", "flow cytometry", "whole-genome sequencing",
    "a prospective multicenter study", "quantitative PCR", "machine learning models", "a case-control design",
    "immunohistochemistry", "longitudinal imaging", "a zebrafish model", "patient-derived xenografts",
    "Mendelian randomization",
]

GENERAL = ("patients samples subjects participants levels function activity response outcomes effect "
           "mechanism pathway role association changes regulation signaling treatment analysis model "
           "factors markers measurements differences increase decrease").split()

SYLLABLES = ("ka ro mi ten vol zar qui bex lor dun sar pel tiv mor gan fex nor lup vek dra sol "
             "tir bal ces dom hux jin kel mav nep ors pry rul sig tob ulv wex yor zin").split()

FIRST = ("Anna Ben Carla David Elena Farid Grace Hiro Ines Jonas Kavya Liam Mei Nadia Omar Priya "
         "Quentin Rosa Sven Tariq Uma Victor Wen Ximena Yusuf Zoe").split()
LAST = ("Abara Berg Chen Dubois Eriksen Fischer Garcia Haddad Ito Jensen Kowalski Lindqvist Moreau "
        "Nakamura Okafor Petrov Quispe Rossi Silva Tanaka Umarov Varga Weber Xu Yilmaz Zhang").split()

JOURNALS = [
    "Journal of Translational Medicine", "Clinical Research Letters", "Cell Reports Archive",
    "Annals of Experimental Biology", "Frontiers in Synthetic Science", "Molecular Systems Review",
    "International Journal of Epidemiology Methods", "Open Medicine Quarterly", "Biomedical Data Journal",
    "Comparative Physiology Reports", "Genome Notes", "Applied Pharmacology Today",
]

ABSTRACT_TEMPLATES = [
    "{Gen} of {sig0} in {t0} remains poorly understood.",
    "We studied {sig0} and {sig1} in the context of {t0} and {t1} using {method}.",
    "Here we show that {sig1} modulates {t0} {gen} in {t2} {gen2}.",
    "Loss of {sig0} was associated with increased {sa} {t1} and reduced {t3}.",
    "These findings identify {sig2} as a candidate {gen} for {t0} {t4}.",
    "In {n} {gen2}, {sig0} {t2} correlated with {s1} (r = 0.{d}).",
    "Our results suggest that targeting {sig1} may improve {sa} {t3} {gen}.",
    "{Sig2} expression predicted {sb} {t4} in an independent {u0} cohort.",
]

BODY_TEMPLATES = [
    "Previous work has linked {t0} to {t1}, e.g. through {gen} of {sb}.",
    "We analysed {sa} in {n} {gen2} with {method}.",
    "{Sig0} levels were measured at baseline and after {d} weeks (Fig. {d2}).",
    "As reported by {last} et al. {u0} {t1} depends on {t3} and {sa}.",
    "Consistent with this, {sig1} knockdown altered {t2} {gen}.",
    "Table {d2} summarizes {sa} {t4} and {u1} across groups.",
    "The effect of {sig2} on {t0} was independent of {u2}.",
    "{Sig0} and {sig1} showed a significant interaction with {t3} (p < 0.0{d}).",
    "Several limitations apply, i.e. the sample was drawn from a single {u0} center.",
    "Further studies of {sig2} in {t1} {gen2} are warranted.",
    "{Gen} of {sa} {t2} differed between {u1} and control {gen2}.",
    "We also observed changes in {u2} and {sb} {t4}, although these were smaller.",
    "Sensitivity analyses excluding {t3} {gen2} gave similar {sb} estimates.",
    "How {sig0} interacts with {u3} {gen} is not yet clear.",
]

TITLE_TEMPLATES = [
    "{Sig0} regulates {t0} {gen} in {t1}",
    "Role of {sig0} and {sig1} in {t0} {t2}",
    "{T0} and {t1}: insights from {sig0} {gen}",
    "{Sig1}-dependent {t2} in {t0} {gen2}",
    "Association of {sig0} with {t1} {gen}",
]


def entity(rng):
    name = "".join(rng.choice(SYLLABLES) for _ in range(rng.randint(2, 3)))
    kind = rng.random()
    if kind < 0.4:
        return name + str(rng.randint(1, 99))
    return name


def fill(template, rng, sig, topic_terms, other_terms):
    def pick(terms):
        return rng.choice(terms)

    values = {
        "sig0": sig[0], "sig1": sig[1], "sig2": sig[2], "sa": pick(sig), "sb": pick(sig),
        "gen": pick(GENERAL), "gen2": pick(GENERAL), "method": pick(METHODS),
        "n": str(rng.randint(12, 4000)), "d": str(rng.randint(1, 9)), "d2": str(rng.randint(1, 6)),
        "last": pick(LAST), "s1": pick(topic_terms),
    }
    for i in range(5):
        values["t%d" % i] = pick(topic_terms)
    for i in range(4):
        values["u%d" % i] = pick(other_terms)
    for key in list(values):
        values[key[0].upper() + key[1:]] = values[key][:1].upper() + values[key][1:]
    return template.format(**values)


def make_paper(index, rng, topic_names):
    primary, secondary = rng.sample(topic_names, 2)
    topic_terms = TOPICS[primary].split() * 3 + TOPICS[secondary].split()
    other_terms = TOPICS[rng.choice(topic_names)].split() + GENERAL
    sig = [entity(rng) for _ in range(4)]

    title = fill(rng.choice(TITLE_TEMPLATES), rng, sig, topic_terms, other_terms)
    abstract = " ".join(fill(t, rng, sig, topic_terms, other_terms)
                        for t in rng.sample(ABSTRACT_TEMPLATES, rng.randint(4, 6)))
    body = []
    for _ in range(rng.randint(3, 7)):
        sentences = [fill(rng.choice(BODY_TEMPLATES), rng, sig, topic_terms, other_terms)
                     for _ in range(rng.randint(3, 6))]
        body.append(" ".join(sentences))
    if rng.random() < 0.01:
        body = []

    authors = ["%s %s" % (rng.choice(FIRST), rng.choice(LAST)) for _ in range(rng.randint(1, 6))]
    paper = {
        "id": "MS%05d" % (index + 1),
        "title": title,
        "authors": authors,
        "journal": rng.choice(JOURNALS),
        "year": rng.randint(1995, 2020),
        "abstract": abstract,
        "body": body,
    }
    if rng.random() < 0.8:
        paper["doi"] = "10.5555/ms.%05d" % (index + 1)
    return paper


def make_fixture(rng, count):
    records = []
    for i in range(count):
        topic = rng.choice(sorted(TOPICS))
        words = TOPICS[topic].split()
        records.append({
            "doi": "10.5555/ext.%04d" % (i + 1),
            "title": "%s %s and %s %s" % (entity(rng).capitalize(), rng.choice(words), rng.choice(words),
                                          rng.choice(GENERAL)),
            "authors": ["%s %s" % (rng.choice(FIRST), rng.choice(LAST)) for _ in range(rng.randint(1, 4))],
            "journal": rng.choice(JOURNALS),
            "year": rng.randint(1990, 2020),
        })
    return records


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out", required=True)
    parser.add_argument("--fixture")
    parser.add_argument("--papers", type=int, default=500)
    parser.add_argument("--seed", type=int, default=20201016)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    topic_names = sorted(TOPICS)
    with open(args.out, "w", encoding="utf-8") as out:
        for i in range(args.papers):
            out.write(json.dumps(make_paper(i, rng, topic_names), ensure_ascii=False, sort_keys=True) + "\n")
    if args.fixture:
        with open(args.fixture, "w", encoding="utf-8") as out:
            for record in make_fixture(random.Random(args.seed + 1), 40):
                out.write(json.dumps(record, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
