from core.conf import sortnet_setting
from encoding.encoder import MODES


def sortnet_context(request):
    """
    Context processor exposing the toolkit limits to all templates.
    """
    return {
        'exhaustive_limit': sortnet_setting("EXHAUSTIVE_LIMIT"),
        'encoding_modes': MODES,
        'default_mode': sortnet_setting("SYNTHESIS.MODE"),
    }
