"""sdverify: verification of declared socio-demographic data of community
members through dictionary-based linguistic analysis of their posts."""

from .analyzer import EvidenceVector, MatchSet, aggregate_evidence, analyze_track, match_track, tokenize
from .corpus import (
    AGE_BUCKETS,
    Corpus,
    DeclaredProfile,
    InformationTrack,
    Post,
    build_information_track,
    declared_value,
    dump_corpus,
    list_members,
    load_corpus,
)
from .evaluation import (
    EvaluationReport,
    GroundTruth,
    SyntheticSpec,
    evaluate,
    format_results_table,
    generate_synthetic,
    load_benchmark_specs,
    run_benchmark,
)
from .lexicon import (
    Characteristic,
    CompiledMatcher,
    Issue,
    Marker,
    MarkerLexicon,
    compile_lexicon,
    dump_lexicon,
    load_lexicon,
    load_starter_lexicon,
    validate_lexicon,
)
from .verifier import (
    CharacteristicVerdict,
    MemberReport,
    VerifiedProfile,
    VerifierConfig,
    classify_member,
    form_profile,
    normalize,
    reliability,
    verify_characteristic,
    verify_member,
)

__version__ = "0.1.0"

__all__ = [
    "AGE_BUCKETS",
    "Characteristic",
    "CharacteristicVerdict",
    "CompiledMatcher",
    "Corpus",
    "DeclaredProfile",
    "EvaluationReport",
    "EvidenceVector",
    "GroundTruth",
    "InformationTrack",
    "Issue",
    "Marker",
    "MarkerLexicon",
    "MatchSet",
    "MemberReport",
    "Post",
    "SyntheticSpec",
    "VerifiedProfile",
    "VerifierConfig",
    "aggregate_evidence",
    "analyze_track",
    "build_information_track",
    "classify_member",
    "compile_lexicon",
    "declared_value",
    "dump_corpus",
    "dump_lexicon",
    "evaluate",
    "form_profile",
    "format_results_table",
    "generate_synthetic",
    "list_members",
    "load_benchmark_specs",
    "load_corpus",
    "load_lexicon",
    "load_starter_lexicon",
    "match_track",
    "normalize",
    "reliability",
    "run_benchmark",
    "tokenize",
    "validate_lexicon",
    "verify_characteristic",
    "verify_member",
]
