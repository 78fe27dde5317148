"""Order-aware complex-valued word embeddings with executable theory checks.

Words embed as waves: token j at position pos maps to r_j * e^{i(w_j*pos + theta_j)}
per dimension. The package provides the closed forms behind that choice and
their verifiers, complex-valued layers, a small trainer, and a CLI.
"""

from .closed_form import (GeneralSolutionParams, SimplifiedSolutionParams,
                          check_bounded, check_position_free, general_g,
                          simplified_g, witness_b, witness_w)
from .cplx import (ComplexArray, complex_cosine, complex_dense, complex_multiply,
                   modulus_vec, split_activation)
from .data import Dataset, gen_order_task, load_tsv, split_pairs, write_tsv
from .embedding import (ComplexEmbeddingTable, SensitivityProfile, embed_sequence,
                        embed_token, frequency_sensitivity, init_table,
                        parameter_count, positional_part, wrap_phases)
from .kernels import BACKEND
from .layers import (AttentionWeights, RnnCell, attention_energy, attention_output,
                     attention_weights_row, complex_conv1d, fasttext_pool,
                     max_pool_modulus, modulus_readout, rnn_step)
from .model import ModelGraph, backward, build_model, evaluate, forward_loss, predict
from .report import VerificationReport
from .similarity import ngram_similarity
from .sinusoid import bijection_check, complex_pe, pe_period, sinusoidal_pe
from .train import TrainMetrics, grad_check, train

__version__ = "0.1.0"
