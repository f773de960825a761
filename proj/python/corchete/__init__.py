"""Bracketed constituency trees for Spanish school grammar.

The heavy lifting happens in the compiled ``_corchete`` extension; this
package re-exports it and adds the serving protocol in ``corchete.serving``.
"""

from ._corchete import (
    CorpusRecord,
    GrammarError,
    IngestError,
    LabelMapError,
    ParseError,
    TokenizerError,
    Grammar,
    Tree,
    __version__,
    binarize,
    convert,
    count_tokens,
    debinarize,
    evaluate,
    filter_by_token_limit,
    induce,
    main,
    normalize,
    parse,
    predict,
    read_corpus,
    read_grammar,
    render_ascii,
    render_svg,
    repair,
    request_body,
    score,
    serialize,
    split,
    training_example,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
