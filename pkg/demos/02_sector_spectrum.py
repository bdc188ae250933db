"""A quarter-plane question under both maps.

The type-(a) operator is an effect and has a two-valued POM. The Weyl operator
has spectrum outside [0, 1], so no POM answers the question.
"""
import math

from pomquant import (
    GeneratingOperator,
    Indicator,
    QuantizerA,
    QuantizerWeyl,
    Sector,
    SpectrumOutsideUnitInterval,
    effect_report,
    quantize,
    quantize_question,
)

DIM = 64
quarter = Indicator(Sector(math.pi / 2, math.pi))

for name, quantizer in [
    ("type (a), T = |h0><h0|", QuantizerA(GeneratingOperator.fock_projector(0, DIM))),
    ("Weyl", QuantizerWeyl(DIM)),
]:
    a = quantize(quantizer, quarter)
    rep = effect_report(a)
    print(f"{name}: spectrum [{rep.min_eig:.4f}, {rep.max_eig:.4f}]")
    try:
        pom = quantize_question(a)
        print(f"  two-valued POM with outcomes {pom.labels.tolist()}")
    except SpectrumOutsideUnitInterval as exc:
        print(f"  no POM: {exc}")
