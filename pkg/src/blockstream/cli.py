"""Command-line front end: ``hash``, ``mac``, ``specialize`` and ``selftest``.

Exit codes: 0 success, 1 I/O or specializer error (or a failing self-test),
2 usage error (including a malformed key), 3 input longer than the
algorithm's limit.
"""
from __future__ import annotations

import argparse
import sys
from typing import BinaryIO, Sequence

from blockstream import streaming
from blockstream.algorithms import ALGORITHM_NAMES, MAX_BUF_MULTIPLE, OptionRejected, instance
from blockstream.algorithms.agile import decode_key
from blockstream.block_api import ContractViolation, KeyLengthMismatch
from blockstream.kat import KatError, load_vectors, run_vector
from blockstream.specializer import (
    Attribute,
    IrError,
    IrProgram,
    SpecializationRequest,
    build_call_graph,
    emit_ir,
    parse_ir,
    specialize,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_TOO_LONG = 3

PROG = "blockstream"
HASH_ALGS = tuple(a for a in ALGORITHM_NAMES if a != "poly1305")
MAC_ALGS = ("poly1305", "blake2b", "blake2s", "agile")


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"{PROG}: {msg}", file=sys.stderr)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {n}")
    return n


def _binding(text: str) -> tuple[str, str]:
    ext, sep, impl = text.partition("=")
    if not sep or not ext or not impl:
        raise argparse.ArgumentTypeError(f"expected <extern>=<impl>, got {text!r}")
    return ext, impl


# ---------------------------------------------------------------------------
# hash / mac


def _open(path: str) -> BinaryIO:
    return sys.stdin.buffer if path == "-" else open(path, "rb")


def _digest_stream(st: streaming.StreamingState, src: BinaryIO, chunk_size: int) -> bytes:
    while True:
        chunk = src.read(chunk_size)
        if not chunk:
            return st.digest()
        st.update(chunk)


def _run_streams(alg, key: bytes, paths: Sequence[str], chunk_size: int, out) -> int:
    status = EXIT_OK
    with streaming.create(alg, key) as st:
        for path in paths:
            st.reinit(key)
            try:
                src = _open(path)
                try:
                    tag = _digest_stream(st, src, chunk_size)
                finally:
                    if src is not sys.stdin.buffer:
                        src.close()
            except OSError as exc:
                _err(f"{path}: {exc.strerror or exc}")
                status = max(status, EXIT_IO)
                continue
            except streaming.MaximumLengthExceeded as exc:
                _err(f"{path}: {exc}")
                status = EXIT_TOO_LONG
                continue
            print(f"{tag.hex()}  {path}", file=out)
    return status


def run_hash(args: argparse.Namespace, out=None) -> int:
    try:
        alg = instance(args.alg, buf_multiple=args.buf_multiple)
    except OptionRejected as exc:
        raise UsageError(str(exc)) from None
    return _run_streams(alg, b"", args.paths, args.chunk_size, out or sys.stdout)


def run_mac(args: argparse.Namespace, out=None) -> int:
    try:
        key = bytes.fromhex(args.key)
    except ValueError:
        raise UsageError(f"--key is not valid hex: {args.key!r}") from None
    try:
        if args.alg in ("blake2b", "blake2s"):
            if not key:
                raise UsageError(f"{args.alg} MAC needs a nonempty key")
            alg = instance(args.alg, key_len=len(key), buf_multiple=args.buf_multiple)
        else:
            alg = instance(args.alg, buf_multiple=args.buf_multiple)
        alg.check_key(key)
        if args.alg == "agile":
            decode_key(key)
    except (OptionRejected, KeyLengthMismatch, ContractViolation) as exc:
        raise UsageError(str(exc)) from None
    return _run_streams(alg, key, args.paths, args.chunk_size, out or sys.stdout)


# ---------------------------------------------------------------------------
# specialize


def _default_entries(p: IrProgram) -> tuple[str, ...]:
    """Indexed specialize functions that no other function calls."""
    graph = build_call_graph(p)
    return tuple(
        fn.name
        for fn in p.functions
        if fn.indexed and fn.attribute is Attribute.SPECIALIZE and not graph.callers(fn.name)
    )


def run_specialize(args: argparse.Namespace, out=None) -> int:
    out = out or sys.stdout
    try:
        program = None
        for path in args.inputs:
            with open(path, encoding="utf-8") as fh:
                part = parse_ir(fh.read())
            program = part if program is None else program.merged(part)
        bindings = dict(args.bind or [])
        entries = tuple(args.entry) if args.entry else _default_entries(program)
        req = SpecializationRequest(args.index, bindings, entries, args.suffix)
        result = specialize(program, req)
    except OSError as exc:
        _err(f"{exc.filename}: {exc.strerror or exc}")
        return EXIT_IO
    except IrError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_IO

    text = emit_ir(result)
    if args.output and args.output != "-":
        try:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            _err(f"{args.output}: {exc.strerror or exc}")
            return EXIT_IO
    else:
        out.write(text)
    if args.print_names:
        known = program.names
        for fn in result.functions:
            if fn.name not in known:
                print(fn.name, file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# selftest


def run_selftest(args: argparse.Namespace, out=None) -> int:
    out = out or sys.stdout
    try:
        vectors = load_vectors(args.vectors)
    except KatError as exc:
        _err(str(exc))
        return EXIT_IO
    if args.filter:
        vectors = [v for v in vectors if v.alg == args.filter.lower()]
        if not vectors:
            raise UsageError(f"no vectors for {args.filter!r}")
    failed = 0
    for v in vectors:
        try:
            ok = run_vector(v).ok
        except (OptionRejected, KeyLengthMismatch, ValueError) as exc:
            ok = False
            _err(f"{v.alg} ({v.source}): {exc}")
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {v.alg:<9} {v.source}", file=out)
    print(f"{len(vectors) - failed}/{len(vectors)} vectors passed", file=out)
    return EXIT_OK if failed == 0 else EXIT_IO


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="Streaming hashes/MACs and an IR specializer.")
    sub = parser.add_subparsers(dest="command", required=True)

    def stream_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--chunk-size", type=_positive, default=65536, help="bytes per read (default 65536)")
        p.add_argument("--buf-multiple", type=_positive, default=1, help=f"buffer size in blocks, 1..{MAX_BUF_MULTIPLE}")
        p.add_argument("paths", nargs="*", default=["-"], help="input files; '-' is stdin (default)")

    h = sub.add_parser("hash", help="digest files")
    h.add_argument("--alg", required=True, choices=HASH_ALGS)
    stream_opts(h)
    h.set_defaults(run=run_hash)

    m = sub.add_parser("mac", help="authenticate files under a key")
    m.add_argument("--alg", required=True, choices=MAC_ALGS)
    m.add_argument("--key", required=True, help="key as hex (agile: one byte algorithm id)")
    stream_opts(m)
    m.set_defaults(run=run_mac)

    s = sub.add_parser("specialize", help="functorize and instantiate an indexed IR program")
    s.add_argument("inputs", nargs="+", help="IR files, merged in order")
    s.add_argument("--index", required=True, help="index symbol to instantiate at")
    s.add_argument("--bind", action="append", type=_binding, metavar="EXTERN=IMPL", help="repeatable")
    s.add_argument("--suffix", default="spec", help="mangling suffix (default: spec)")
    s.add_argument("--entry", action="append", help="entry point (repeatable; default: uncalled specialize functions)")
    s.add_argument("-o", "--output", help="output file (default stdout)")
    s.add_argument("--print-names", action="store_true", help="list the generated names on stdout")
    s.set_defaults(run=run_specialize)

    t = sub.add_parser("selftest", help="run the known-answer vectors")
    t.add_argument("--filter", help="only this algorithm")
    t.add_argument("--vectors", help="vector file (default: bundled)")
    t.set_defaults(run=run_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
