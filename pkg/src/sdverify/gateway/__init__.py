from .api import create_app
from .service import Gateway, new_run_id
from .store import RunStore, VerificationRequest

__all__ = ["Gateway", "RunStore", "VerificationRequest", "create_app", "new_run_id"]
