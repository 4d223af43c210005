#!/usr/bin/env python3
"""Produce the token-embedding JSONL consumed by `method = embedding`.

The engine deliberately does not run language models itself: contextual
vectors arrive through a file interface and only the aggregation math
(subword -> word -> corpus averaging) lives in C++. This script is the
reference implementation of the producing side. It is not part of the
build and nothing in the test suite depends on it; any program that
writes the same records works just as well.

Output format, one JSON object per line:

    {"segment_index": 0,            # row index of the segment in the corpus
     "occurrence_id": "0:3",        # unique per record; "<segment>:<first subword>"
     "word": "doctors",             # surface form; the engine lowercases and
                                    # lemmatizes it with its own rule table
     "span": [3, 4],                # first and last subword index, inclusive
     "vectors": [[...], [...]]}     # one hidden-state vector per subword

Requirements: transformers, torch (pip install transformers torch).
Any checkpoint with a fast tokenizer works; fine-tuned or domain models
can be dropped in via --model without touching the engine.

Example:
    python tools/emit_token_embeddings.py \
        --input corpus.jsonl --output embeddings.jsonl --model roberta-base
"""

import argparse
import csv
import json
import sys


def read_segments(path, text_field):
    """Yield (segment_index, text) from a CSV or JSONL corpus file."""
    if path.endswith((".jsonl", ".ndjson", ".json")):
        with open(path, encoding="utf-8") as fh:
            index = 0
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                row = json.loads(line)
                yield index, str(row.get(text_field, "") or "")
                index += 1
    else:
        with open(path, encoding="utf-8", newline="") as fh:
            for index, row in enumerate(csv.DictReader(fh)):
                yield index, str(row.get(text_field, "") or "")


def wordlike(token_text):
    return any(ch.isalpha() for ch in token_text)


def emit(args):
    try:
        import torch
        from transformers import AutoModel, AutoTokenizer
    except ImportError as exc:
        sys.exit(f"missing dependency: {exc}. Install with: pip install transformers torch")

    tokenizer = AutoTokenizer.from_pretrained(args.model, use_fast=True)
    if not tokenizer.is_fast:
        sys.exit("a fast tokenizer is required (word_ids alignment)")
    model = AutoModel.from_pretrained(args.model).to(args.device).eval()

    written = 0
    with open(args.output, "w", encoding="utf-8") as out:
        for segment_index, text in read_segments(args.input, args.text_field):
            if not text.strip():
                continue
            encoding = tokenizer(text, return_tensors="pt", truncation=True,
                                 max_length=args.max_length)
            with torch.no_grad():
                hidden = model(**{k: v.to(args.device) for k, v in encoding.items()})
            # [num_subwords, dim] for this single segment
            states = hidden.last_hidden_state[0].cpu().tolist()

            # Group consecutive subwords by the word they came from. word_ids()
            # is None for special tokens ([CLS], [SEP], <s>, ...), which are
            # skipped; the span indices refer to the tokenizer's subword
            # positions so records stay reproducible from (model, text) alone.
            word_ids = encoding.word_ids(0)
            spans = {}  # word id -> [first, last]
            for position, wid in enumerate(word_ids):
                if wid is None:
                    continue
                if wid in spans:
                    spans[wid][1] = position
                else:
                    spans[wid] = [position, position]

            for wid in sorted(spans):
                first, last = spans[wid]
                start, end = encoding.word_to_chars(0, wid)
                word = text[start:end]
                if not wordlike(word):
                    continue
                record = {
                    "segment_index": segment_index,
                    "occurrence_id": f"{segment_index}:{first}",
                    "word": word,
                    "span": [first, last],
                    "vectors": [states[p] for p in range(first, last + 1)],
                }
                out.write(json.dumps(record) + "\n")
                written += 1

    print(f"wrote {written} records to {args.output}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--input", required=True, help="corpus CSV or JSONL file")
    parser.add_argument("--output", required=True, help="embedding JSONL to write")
    parser.add_argument("--model", default="roberta-base",
                        help="any transformers checkpoint with a fast tokenizer")
    parser.add_argument("--device", default="cpu", help="torch device, e.g. cpu or cuda")
    parser.add_argument("--text-field", default="text",
                        help="corpus column holding the segment text")
    parser.add_argument("--max-length", type=int, default=512,
                        help="tokenizer truncation length")
    emit(parser.parse_args())


if __name__ == "__main__":
    main()
