import logging

logger = logging.getLogger(__name__)


def distributed_map(func, args, n_workers=1):
    """ Apply func to every element of args, in order.

    With n_workers > 1 the calls are spread over a dask LocalCluster, otherwise the
    builtin map is used. Results are returned in the order of args either way.
    """
    args = list(args)
    if n_workers > 1:
        from dask.distributed import Client, LocalCluster
        logger.info('Distributing %d tasks over %d workers', len(args), n_workers)
        with LocalCluster(n_workers=n_workers, threads_per_worker=1, processes=False) as cluster, \
                Client(cluster) as client:
            futures = client.map(func, args, pure=False)
            return client.gather(futures)
    return list(map(func, args))
