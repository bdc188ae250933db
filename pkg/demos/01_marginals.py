"""Weyl quantization of a strip in phase space reproduces the sharp position measure.

Compares Gamma^Par(chi_{B x R}) with E^Q(B) on the lowest levels, then shows
the type-(a) map giving an unsharp (smeared) version of the same question.
"""
import numpy as np

from pomquant import (
    BorelSet1D,
    GeneratingOperator,
    QuantizerA,
    QuantizerWeyl,
    TruncationConfig,
    effect_report,
    gamma_a,
    gamma_weyl,
    position_measure,
    position_question,
)

DIM = 48
K = DIM // 4

cfg = TruncationConfig(DIM)
b = BorelSet1D.parse("[-1,2]")
sharp = position_measure(cfg, b)

weyl = gamma_weyl(QuantizerWeyl(DIM), position_question(b))
print(f"Weyl strip vs E^Q({b}) on the {K}x{K} block: {np.abs(weyl - sharp)[:K, :K].max():.2e}")

unsharp = gamma_a(QuantizerA(GeneratingOperator.fock_projector(0, DIM)), position_question(b))
print(f"type-(a) strip differs from E^Q by {np.abs(unsharp - sharp)[:K, :K].max():.3f}")
rep = effect_report(unsharp)
print(f"type-(a) spectrum [{rep.min_eig:.3g}, {rep.max_eig:.6f}], projection defect {rep.proj_defect:.3f}")
