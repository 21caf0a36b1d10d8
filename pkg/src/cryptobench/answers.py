"""Registry of published answers and the computations that reproduce them.

Each entry pairs an expected value with a function computing it. Entries
with a ``data`` key need an external file or directory and are reported as
SKIPPED when it is not supplied. ``verify_paper_answers`` accepts overrides
of expected values, which is how a corrupted constant is simulated.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping

from cryptobench import (cbc_cpa, f2linalg, gcm_attack, gf2_128, hash_h, hidden_rsa, jpeg_codec,
                         orthomorph, primality, puzzles, stairsbox)
from cryptobench.bits import BitString
from cryptobench.report import RunReport

DATA_KEYS = ("f_table", "jpeg_corpus", "gcm_task1", "gcm_task2", "gcm_task3")


@dataclass(frozen=True)
class AnswerCheck:
    name: str
    expected: Any
    compute: Callable[..., Any]
    data: str | None = None


# --- mandatory computations ------------------------------------------------


def _bases_products():
    fam = f2linalg.BasisFamily.from_strings(2, ["1100", "0110"])
    return {v.to_str() for v in f2linalg.componentwise_products(fam)}


def _bases_example():
    return f2linalg.is_basis_family(f2linalg.BasisFamily.from_strings(2, ["1100", "0110"]))


def _rgb_origin_unreachable():
    return puzzles.RgbState(0, 0) not in puzzles.rgb_reachable()


def _bob_13():
    return all(primality.bob_test(13, a).probably_prime for a in range(2, 12))


def _prime_exceptions(limit: int = 10**4):
    bad = 0
    for n in range(5, limit, 2):
        if primality.is_probable_prime(n):
            bad += len(primality.accept_census(n, "bob")) != n - 3
    return bad


def _census_rows(limit: int = 10**4):
    return primality.census_sweep(3, limit)


def _unequal_censuses(rows):
    return sum(not r.equal for r in rows)


def _liar_bound(rows):
    return all(r.liar_fraction < 0.25 for r in rows if r.n > 9)


def _cpa(strategy: str):
    return str(cbc_cpa.estimate_advantage(strategy, 10**4, seed=0))


_REFERENCE_S = stairsbox.SBox64(stairsbox.REFERENCE_SBOX)


def _stairs_candidates():
    return sorted(f"{a}x+{b}" for a, b in stairsbox.x_candidates(stairsbox.recover(_REFERENCE_S)))


def _stairs_recompose():
    decs = stairsbox.recover(_REFERENCE_S)
    return bool(decs) and all(stairsbox.compose(d.A, d.X, d.B) == _REFERENCE_S for d in decs)


def _rsa_self_generated(rng: random.Random):
    inst = hidden_rsa.generate_instance(64, 65537, rng)
    y = hidden_rsa.oracle_encrypt(inst, 2020)
    out = hidden_rsa.attack(lambda x: hidden_rsa.oracle_encrypt(inst, x), y, rng=rng)
    return [out.e, out.n == inst.n, out.plaintext]


def _ortho_counts():
    res = orthomorph.exhaustive_sweep(4, collect=False)
    return [res.brute_count, res.predicate_count, res.disagreements]


def _ortho_r1_zero():
    # brute-force orthomorphisms with r1 divisible by 4
    return any(t.r1 % 4 == 0 for t in orthomorph.exhaustive_sweep(4).orthomorphisms)


def _jpeg_worked_bits():
    return jpeg_codec.encode_matrix(jpeg_codec.worked_matrix()).to_str()


def _jpeg_synthetic():
    return jpeg_codec.stats([jpeg_codec.worked_matrix()] * 100).total_bits


def _hash_reset(rng: random.Random):
    f = hash_h.SecretFunction(256, rng.getrandbits(64))
    x = rng.getrandbits(256)
    m = BitString(x, 256) + BitString(f(x), 256)
    return hash_h.hash_h(hash_h.HashParams(256, f), m).to_hex()


def _hash_q3_printed():
    return hash_h.q3_second_preimage(int(hash_h.F_OF_ZERO_HEX, 16)).to_hex()


def _roundtrip(e: int):
    return gf2_128.parse_sparse(gf2_128.to_sparse(e)) == e and gf2_128.from_hex(gf2_128.to_hex(e)) == e


# --- data-gated computations -----------------------------------------------


def _hash_q3_table(path: Path):
    table = hash_h.load_f_table(path)
    return hash_h.q3_second_preimage(table(0)).to_hex()


def _jpeg_corpus(path: Path):
    return jpeg_codec.corpus_stats(path).total_bits


def _gcm_task1(path: Path):
    recs = gcm_attack.load_task_dir(path)
    crib = gcm_attack.TASK1_CRIB.encode()
    text = gcm_attack.keystream_reuse_decrypt(recs[0], crib, recs[5])
    return text.decode("utf-8", errors="replace")


def _gcm_pair_roots(path: Path, rng: random.Random):
    recs = gcm_attack.load_task_dir(path)
    roots: set[int] = set()
    for group in gcm_attack.same_iv_groups(recs):
        a, b = group[:2]
        roots |= {h for h, _ in gcm_attack.recover_h_from_pair(recs[a], recs[b], gcm_attack.AAD_HEADER_IV, rng)}
    return roots


def _gcm_task2(path: Path, rng: random.Random):
    return gcm_attack.TASK2_H in _gcm_pair_roots(path, rng)


def _gcm_task3(path: Path, rng: random.Random):
    recs = gcm_attack.load_task_dir(path)
    for group in gcm_attack.same_iv_groups(recs):
        if len(group) >= 3:
            a, b, c = group[:3]
            return gf2_128.to_sparse(gcm_attack.recover_h_from_triple(recs[a], recs[b], recs[c], rng=rng))
    raise ValueError("no three records share an IV")


_rows_cache: dict[int, list] = {}


def _rows():
    if 10**4 not in _rows_cache:
        _rows_cache[10**4] = _census_rows()
    return _rows_cache[10**4]


REGISTRY: tuple[AnswerCheck, ...] = (
    AnswerCheck("bases.example_products", {"1111", "1100", "0110", "0100"}, _bases_products),
    AnswerCheck("bases.example_is_basis", True, _bases_example),
    AnswerCheck("bases.count_d3", 40320, lambda: f2linalg.basis_count_equal_case(3)),
    AnswerCheck("puzzles.winston_2020_1984", True, lambda: puzzles.winston_reachable(2020, 1984)),
    AnswerCheck("puzzles.winston_2020_2021", False, lambda: puzzles.winston_reachable(2020, 2021)),
    AnswerCheck("puzzles.poly_consistent", False, lambda: puzzles.poly_consistent([(20, 7), (15, 5)])),
    AnswerCheck("puzzles.rgb_invariant_start", 152, lambda: puzzles.rgb_invariant(puzzles.RGB_START)),
    AnswerCheck("puzzles.rgb_invariant_1_18", 1, lambda: puzzles.rgb_invariant(puzzles.RgbState(1, 18))),
    AnswerCheck("puzzles.rgb_origin_unreachable", True, _rgb_origin_unreachable),
    AnswerCheck("puzzles.modpow", 4, lambda: puzzles.modpow(3, 40231, 5)),
    AnswerCheck("primality.q1_n13", True, _bob_13),
    AnswerCheck("primality.q1_prime_exceptions", 0, _prime_exceptions),
    AnswerCheck("primality.q2_unequal_censuses", 0, lambda: _unequal_censuses(_rows())),
    AnswerCheck("primality.q2_liar_fraction_below_quarter", True, lambda: _liar_bound(_rows())),
    AnswerCheck("cpa.adversary_one", "1/2", lambda: _cpa("one")),
    AnswerCheck("cpa.adversary_two", "1/2", lambda: _cpa("two")),
    AnswerCheck("stairsbox.num_to_vec_2", "000010", lambda: stairsbox.num_to_vec(2).to_str()),
    AnswerCheck("stairsbox.x_candidates",
               sorted(f"{a}x+{b}" for a in (1, 33) for b in (1, 17, 33, 49)), _stairs_candidates),
    AnswerCheck("stairsbox.recompose", True, _stairs_recompose),
    AnswerCheck("stairsbox.degree_staircase", True, lambda: stairsbox.has_staircase(_REFERENCE_S)),
    AnswerCheck("hidden_rsa.p_times_q", True, lambda: hidden_rsa.challenge_constant_checks()["p*q == n"]),
    AnswerCheck("hidden_rsa.e_times_d", True, lambda: hidden_rsa.challenge_constant_checks()["e*d == 1 mod phi"]),
    AnswerCheck("hidden_rsa.d_is_inverse", True, lambda: hidden_rsa.challenge_constant_checks()["d == e^-1 mod phi"]),
    AnswerCheck("hidden_rsa.plaintext", hidden_rsa.CHALLENGE_PLAIN,
               lambda: hidden_rsa.decrypt((hidden_rsa.CHALLENGE_N, hidden_rsa.CHALLENGE_E, hidden_rsa.CHALLENGE_P,
                                           hidden_rsa.CHALLENGE_Q), hidden_rsa.CHALLENGE_Y)),
    AnswerCheck("hidden_rsa.self_generated_e65537", [65537, True, 2020], _rsa_self_generated),
    AnswerCheck("ortho.m4_counts", [256, 256, 0], _ortho_counts),
    AnswerCheck("ortho.closed_form_count_m4", 256, lambda: orthomorph.predicate_count(4)),
    AnswerCheck("ortho.r1_divisible_by_4_occurs", False, _ortho_r1_zero),
    AnswerCheck("jpeg.code_47", "1111110101111", lambda: jpeg_codec.expgolomb_encode(47).to_str()),
    AnswerCheck("jpeg.code_0", "0", lambda: jpeg_codec.expgolomb_encode(0).to_str()),
    AnswerCheck("jpeg.worked_sequence", list(jpeg_codec.WORKED_SEQUENCE),
               lambda: jpeg_codec.zigzag(jpeg_codec.worked_matrix())[:len(jpeg_codec.WORKED_SEQUENCE)]),
    AnswerCheck("jpeg.worked_bits", jpeg_codec.WORKED_BITS, _jpeg_worked_bits),
    AnswerCheck("jpeg.worked_length", 91, lambda: len(_jpeg_worked_bits())),
    AnswerCheck("jpeg.synthetic_corpus", 9100, _jpeg_synthetic),
    AnswerCheck("hash.reset_pair", "00" * 32, _hash_reset),
    AnswerCheck("hash.q3_message_hex", hash_h.Q3_MESSAGE_HEX,
               lambda: BitString.from_text(hash_h.Q3_TEXT).to_hex()),
    AnswerCheck("hash.q3_preimage_printed_f0", hash_h.Q3_PREIMAGE_HEX, _hash_q3_printed),
    AnswerCheck("gcm.task2_h_roundtrip", True, lambda: _roundtrip(gcm_attack.TASK2_H)),
    AnswerCheck("gcm.task3_h_roundtrip", True, lambda: _roundtrip(gcm_attack.TASK3_H)),
    AnswerCheck("hash.q3_preimage_from_table", hash_h.Q3_PREIMAGE_HEX, _hash_q3_table, "f_table"),
    AnswerCheck("jpeg.official_corpus_bits", 6_694_303, _jpeg_corpus, "jpeg_corpus"),
    AnswerCheck("gcm.task1_message5", gcm_attack.TASK1_EXPECTED_5, _gcm_task1, "gcm_task1"),
    AnswerCheck("gcm.task2_h_among_roots", True, _gcm_task2, "gcm_task2"),
    AnswerCheck("gcm.task3_h", gf2_128.to_sparse(gcm_attack.TASK3_H), _gcm_task3, "gcm_task3"),
)


def _takes_rng(fn: Callable) -> bool:
    return fn in (_rsa_self_generated, _hash_reset, _gcm_task2, _gcm_task3)


def verify_paper_answers(data: Mapping[str, str | Path | None] | None = None,
                         overrides: Mapping[str, Any] | None = None, seed: int = 0,
                         only: str | None = None) -> RunReport:
    """Run every registered check; ``only`` restricts to names with that prefix."""
    data = dict(data or {})
    overrides = dict(overrides or {})
    unknown = set(overrides) - {c.name for c in REGISTRY}
    if unknown:
        raise KeyError(f"no such checks: {sorted(unknown)}")
    report = RunReport("verify-paper", seed, {k: str(v) for k, v in data.items() if v is not None})
    for chk in REGISTRY:
        if only and not chk.name.startswith(only):
            continue
        expected = overrides.get(chk.name, chk.expected)
        rng = random.Random(f"{seed}:{chk.name}")
        args: list[Any] = []
        if chk.data:
            path = data.get(chk.data)
            if path is None:
                report.skip(chk.name, f"needs --{chk.data.replace('_', '-')}")
                continue
            args.append(Path(path))
        if _takes_rng(chk.compute):
            args.append(rng)
        try:
            got = chk.compute(*args)
        except Exception as exc:  # a crashed check is a failed check
            report.fail(chk.name, f"{type(exc).__name__}: {exc}", expected)
            continue
        report.check(chk.name, expected, got)
    return report
