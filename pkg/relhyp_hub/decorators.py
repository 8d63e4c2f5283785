import functools
import inspect
import time
from collections.abc import Callable

from relhyp_hub.logging_config import get_logger

_BUDGET_PARAMS = ("radius", "depth", "bound", "seed", "A", "d_max", "budget", "max_depth")


def log_action(action_name: str | None = None, verbose: bool = False):
    """
    Декоратор для логирования вычислительных операций.
    Args:
        action_name: Имя действия (если None, будет использовано имя функции)
        verbose: Режим подробного логирования
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            logger = get_logger("relhyp.actions")
            action = action_name or func.__name__.upper()

            log_extra: dict = {"action": action}
            try:
                bound_args = inspect.signature(func).bind(*args, **kwargs)
                bound_args.apply_defaults()
                for param_name, param_value in bound_args.arguments.items():
                    if param_name in _BUDGET_PARAMS and param_value is not None:
                        log_extra[f"param_{param_name}"] = param_value
            except TypeError:
                pass

            if verbose:
                log_extra["function_name"] = func.__name__
                log_extra["module_name"] = func.__module__

            logger.info(f"Начало действия: {action}", extra=log_extra)
            start_time = time.perf_counter()

            try:
                result = func(*args, **kwargs)
            except Exception as e:
                logger.error(
                    f"Ошибка в действии {action}: {e}",
                    extra={
                        **log_extra,
                        "result": "ERROR",
                        "error_type": type(e).__name__,
                        "error_message": str(e),
                    },
                )
                raise

            execution_time = time.perf_counter() - start_time
            log_extra.update({
                "result": "OK",
                "execution_time_ms": round(execution_time * 1000, 2),
            })
            logger.info(f"Завершение действия: {action}", extra=log_extra)
            return result

        return wrapper
    return decorator
