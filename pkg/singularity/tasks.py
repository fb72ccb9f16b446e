from celery import shared_task
from celery.signals import task_prerun, task_postrun
from singularity.utils.local_singularity import LocalModel, cyclic_oracle_agreement, ksg0_cyclic, local_invariants
import logging

logger = logging.getLogger(__name__)

@shared_task(name="ksg0_cyclic_task")
def ksg0_cyclic_task(m, weights, use_dual=True, max_order=None):
    try:
        kwargs = {"use_dual": use_dual}
        if max_order is not None:
            kwargs["max_order"] = max_order
        return ksg0_cyclic(m, weights, **kwargs).to_json_object(include_matrix=False)
    except Exception as e:
        logger.error(f"Error computing K^sg_0 of 1/{m}{tuple(weights)}: {str(e)}")
        raise e

@shared_task(name="local_invariants_task")
def local_invariants_task(model_data, use_dual=True, max_order=None, require_free=False):
    try:
        kwargs = {"max_order": max_order} if max_order is not None else {}
        model = LocalModel.from_json_object(model_data, **kwargs)
        return local_invariants(model, use_dual=use_dual, require_free=require_free, **kwargs).to_json_object(include_matrix=False)
    except Exception as e:
        logger.error(f"Error computing local invariants of {model_data.get('label')}: {str(e)}")
        raise e

@shared_task(name="oracle_agreement_task")
def oracle_agreement_task(m, weights, max_order=None):
    try:
        kwargs = {"max_order": max_order} if max_order is not None else {}
        agree, fast, general = cyclic_oracle_agreement(m, weights, **kwargs)
        return {
            "m": m,
            "weights": list(weights),
            "agree": agree,
            "fast": fast.cokernel.to_json_object(),
            "general": general.cokernel.to_json_object(),
        }
    except Exception as e:
        logger.error(f"Error comparing pipelines on 1/{m}{tuple(weights)}: {str(e)}")
        raise e

@task_prerun.connect
def task_prerun_handler(sender=None, headers=None, body=None, **kwargs):
    logger.info(f'Task {sender} starting...')

@task_postrun.connect
def task_postrun_handler(sender=None, headers=None, body=None, **kwargs):
    logger.info(f'Task {sender} finished...')
