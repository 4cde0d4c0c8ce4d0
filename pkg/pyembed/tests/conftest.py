"""Fixtures: a tiny local sentence-transformer checkpoint built offline.

The hub is never contacted; a small random-weight BERT encoder with mean
pooling is constructed in a temp directory and loaded by path. Random
weights are fine: the contract under test is about the file format, widths,
norms, and determinism, not embedding quality.
"""

import json
import os

import pytest

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")
os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")

VOCAB = (
    ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    + [chr(c) for c in range(ord("a"), ord("z") + 1)]
    + [chr(c) for c in range(ord("0"), ord("9") + 1)]
    + ["##" + chr(c) for c in range(ord("a"), ord("z") + 1)]
    + ["how", "do", "i", "merge", "two", "dicts", "in", "python", "the",
       "a", "to", "with", "file", "read", "csv", "pandas", "what", "is",
       "question", "body", "text", "?", ".", ","]
)


def _build_checkpoint(root, hidden_size):
    import torch
    from transformers import BertConfig, BertModel, BertTokenizerFast
    from sentence_transformers import SentenceTransformer

    try:
        from sentence_transformers.sentence_transformer.modules import Pooling, Transformer
    except ImportError:  # older sentence-transformers releases
        from sentence_transformers.models import Pooling, Transformer

    bert_dir = root / "bert"
    bert_dir.mkdir()
    vocab_path = bert_dir / "vocab.txt"
    vocab_path.write_text("\n".join(VOCAB) + "\n")
    tokenizer = BertTokenizerFast(vocab_file=str(vocab_path), do_lower_case=True)
    tokenizer.save_pretrained(str(bert_dir))

    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=hidden_size,
        num_hidden_layers=2,
        num_attention_heads=4,
        intermediate_size=4 * hidden_size,
        max_position_embeddings=128,
    )
    BertModel(config).save_pretrained(str(bert_dir))

    word = Transformer(str(bert_dir), max_seq_length=64)
    get_dim = getattr(word, "get_embedding_dimension", None)
    pooling = Pooling(get_dim() if get_dim else word.get_word_embedding_dimension(), "mean")
    model_dir = root / f"tiny-encoder-{hidden_size}"
    SentenceTransformer(modules=[word, pooling]).save(str(model_dir))
    return str(model_dir)


@pytest.fixture(scope="session")
def model_768(tmp_path_factory):
    return _build_checkpoint(tmp_path_factory.mktemp("ckpt768"), 768)


@pytest.fixture(scope="session")
def model_64(tmp_path_factory):
    return _build_checkpoint(tmp_path_factory.mktemp("ckpt64"), 64)


@pytest.fixture()
def questions_50(tmp_path):
    """50 questions; ids 7 and 23 carry byte-identical texts."""
    path = tmp_path / "questions.jsonl"
    with open(path, "w", encoding="utf-8") as f:
        for qid in range(1, 51):
            if qid in (7, 23):
                title, body = "How do I merge two dicts?", "Same body text."
            else:
                title = f"Question {qid} about topic {qid % 9}"
                body = f"Body text number {qid} with a few words to encode."
            f.write(json.dumps({
                "id": qid,
                "title": title,
                "bodyText": body,
                "tags": ["python"],
                "answered": qid % 2 == 0,
            }) + "\n")
    return path
