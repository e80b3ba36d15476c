"""
Matching API
Generate update sequences and replay them through the engine
"""

from flask import Blueprint, request, jsonify, current_app
import json
import logging

from .dynamic_matching.core.errors import MatchingError, WorkloadError
from .dynamic_matching.core.processor import ReplayProcessor
from .dynamic_matching.utils.metrics import export
from .dynamic_matching.utils.workload import (
    extend_with_teardown,
    gen_named,
    gen_random,
    parse,
    serialize,
)

# Create blueprint
matching_bp = Blueprint('matching', __name__, url_prefix='/api')

logger = logging.getLogger(__name__)


def _int_field(data: dict, name: str, default=None):
    value = data.get(name, default)
    if value is None or value == '':
        return default
    try:
        return int(value)
    except (ValueError, TypeError):
        raise WorkloadError(f"'{name}' must be an integer, got {value!r}")


def _sequence_from(data: dict):
    text = data.get('sequence')
    if not text:
        raise WorkloadError("'sequence' is required")
    seq = parse(text)
    if data.get('teardown'):
        seq = extend_with_teardown(seq)
    limit = current_app.config.get('API_MAX_UPDATES')
    if limit and len(seq) > limit:
        raise WorkloadError(f"sequence has {len(seq)} updates, limit is {limit}")
    return seq


def _replay(data: dict, verify_every: int, check_oracle: bool):
    seq = _sequence_from(data)
    processor = ReplayProcessor(
        seed=_int_field(data, 'seed', current_app.config['MATCHING_SEED']),
        threshold=_int_field(data, 'threshold', current_app.config['MATCHING_THRESHOLD']),
        verify_every=verify_every,
        check_oracle=check_oracle,
        oracle_max_vertices=current_app.config['ORACLE_MAX_VERTICES'],
        oracle_max_edges=current_app.config['ORACLE_MAX_EDGES'],
    )
    result = processor.run(seq)
    return jsonify({
        'success': result.success,
        'result': result.to_dict(),
        'stats': json.loads(export(result.stats, 'json')),
        'violations': [v.to_dict() for v in result.report.violations],
    })


@matching_bp.route('/health', methods=['GET'])
def health():
    return jsonify({'success': True, 'status': 'ok'})


@matching_bp.route('/generate', methods=['POST'])
def generate():
    """Generate a random or named sequence and return it in file format"""
    try:
        data = request.get_json(silent=True) or {}
        pattern = data.get('pattern', 'random')
        n = _int_field(data, 'n')
        if n is None:
            raise WorkloadError("'n' is required")
        seed = _int_field(data, 'seed', 0)

        if pattern == 'random':
            t = _int_field(data, 't', 10 * n)
            try:
                p_insert = float(data.get('p_insert', 0.6))
            except (ValueError, TypeError):
                raise WorkloadError(f"'p_insert' must be a number, got {data.get('p_insert')!r}")
            seq = gen_random(n, t, p_insert, seed)
        else:
            seq = gen_named(pattern, n, seed, _int_field(data, 'rounds'))

        logger.info(f"📥 Generated {pattern} sequence: n={n}, updates={len(seq)}")
        return jsonify({'success': True, 'sequence': serialize(seq), 'updates': len(seq)})

    except MatchingError as e:
        logger.warning(f"⚠️ Bad generate request: {e}")
        return jsonify({'success': False, 'error': str(e)}), 400
    except Exception as e:
        logger.error(f"❌ Error generating sequence: {e}", exc_info=True)
        return jsonify({'success': False, 'error': str(e)}), 500


@matching_bp.route('/run', methods=['POST'])
def run():
    """Replay a sequence, verifying every `verify_every` updates"""
    try:
        data = request.get_json(silent=True) or {}
        verify_every = _int_field(data, 'verify_every', current_app.config['VERIFY_EVERY'])
        return _replay(data, verify_every, check_oracle=False)

    except MatchingError as e:
        logger.warning(f"⚠️ Bad run request: {e}")
        return jsonify({'success': False, 'error': str(e)}), 400
    except Exception as e:
        logger.error(f"❌ Error replaying sequence: {e}", exc_info=True)
        return jsonify({'success': False, 'error': str(e)}), 500


@matching_bp.route('/verify', methods=['POST'])
def verify():
    """Replay with verification after every update plus the oracle ratio check"""
    try:
        data = request.get_json(silent=True) or {}
        return _replay(data, verify_every=1, check_oracle=True)

    except MatchingError as e:
        logger.warning(f"⚠️ Bad verify request: {e}")
        return jsonify({'success': False, 'error': str(e)}), 400
    except Exception as e:
        logger.error(f"❌ Error verifying sequence: {e}", exc_info=True)
        return jsonify({'success': False, 'error': str(e)}), 500
