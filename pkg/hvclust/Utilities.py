import json
import math
import os
import warnings

import numpy as np
import pandas as pd
import yaml

from hvclust.Errors import DomainError, NumericalWarning


OUTPUT_DIR_VARIABLE = 'HVCLUST_OUTPUT_DIR'


def get_output_dir(override=None, verbose=False):
    """ Resolve the directory that run artifacts are written to.

    An explicit ``override`` wins; otherwise the environment variable
    ``HVCLUST_OUTPUT_DIR`` is queried and, if it is unset or empty, the
    current working directory is used. The directory is created if needed.

    Args:
        override (str, optional):
            Directory requested on the command line or in a config file.
        verbose (bool, optional):
            Print where the outputs will go. Defaults to ``False``.

    Returns:
        str:
            Absolute path of the output directory.

    """

    if override:
        output_dir = override
    else:
        output_dir = os.environ.get(OUTPUT_DIR_VARIABLE) or os.getcwd()

    output_dir = os.path.abspath(output_dir)
    os.makedirs(output_dir, exist_ok=True)

    if verbose:
        print(f'Writing outputs to {output_dir}')

    return output_dir


def print_dict(dict_to_print, indent=0):
    """ Neatly print a dictionary with indentation for nesting.

    Args:
        dict_to_print (dict):
            The dictionary to print, entries may be sub-dictionaries.
        indent (int, optional):
            The indentation level of the root. Defaults to 0.

    Returns:
        None

    """

    pad = '  ' * indent

    for key, value in dict_to_print.items():
        if isinstance(value, dict):
            print(f'{pad}["{key}"]')
            print_dict(value, indent + 1)
        else:
            print(f'{pad}["{key}"] = ', value)


def dict_to_yaml(dictionary_to_write, yaml_filename, verbose=False):
    """ Write a dictionary to a YAML file, preserving nesting and key order.

    Args:
        dictionary_to_write (dict):
            The dictionary.
        yaml_filename (str):
            Destination file.
        verbose (bool, optional):
            Print the dictionary and destination. Defaults to ``False``.

    Returns:
        None

    """

    if not isinstance(dictionary_to_write, dict):
        raise ValueError('Input is not a dictionary. \nArguments should be (dict_to_write, yaml_filename), \nare they switched?')

    if verbose:
        print('Writing the Dictionary:')
        print_dict(dictionary_to_write)
        print(f'To the File: {yaml_filename}\n')

    with open(yaml_filename, 'w') as fp:
        yaml.dump(dictionary_to_write, fp, sort_keys=False)


def yaml_to_dict(yaml_filename, verbose=False):
    """ Read a YAML file into a dictionary.

    Args:
        yaml_filename (str):
            The YAML file to read.
        verbose (bool, optional):
            Print the dictionary after reading. Defaults to ``False``.

    Returns:
        dict:
            The file contents; an empty file gives an empty dictionary.

    """

    with open(yaml_filename) as fp:
        output_dictionary = yaml.load(fp, Loader=yaml.FullLoader)

    if output_dictionary is None:
        output_dictionary = {}

    if verbose:
        print('Read the Dictionary:')
        print_dict(output_dictionary)
        print(f'From the File: {yaml_filename}\n')

    return output_dictionary


def check_dict_for_nans(dictionary, prefix=''):
    """ Dotted keys of the non-finite float values in a nested dictionary.

    Lists are searched too, their positions appear as ``key[i]``.

    Returns:
        list(str):
            Empty when every float is finite.

    """

    found = []
    for key, value in dictionary.items():
        found += _nonfinite_paths(value, f'{prefix}{key}')
    return found


def _nonfinite_paths(value, path):
    if isinstance(value, dict):
        return check_dict_for_nans(value, path + '.')
    if isinstance(value, (list, tuple, np.ndarray)):
        found = []
        for i, item in enumerate(value):
            found += _nonfinite_paths(item, f'{path}[{i}]')
        return found
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return [path]
    return []


def to_jsonable(obj):
    """ Convert numpy scalars/arrays and non-finite floats for ``json``.

    NaN and infinities become ``None`` (the undefined marker of the
    output files).
    """

    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def dict_to_json(dictionary_to_write, json_filename, verbose=False):
    """ Write a summary dictionary as a deterministic JSON document.

    Keys keep their insertion order and floats use the shortest
    representation that round-trips exactly. Non-finite floats are written
    as ``null`` with a NumericalWarning naming their keys.

    Returns:
        str: the serialized text.

    """

    undefined = check_dict_for_nans(dictionary_to_write)
    if undefined:
        warnings.warn(f'Undefined values written as null: {", ".join(undefined)}', NumericalWarning)

    text = json.dumps(to_jsonable(dictionary_to_write), indent=2, allow_nan=False)

    with open(json_filename, 'w') as fp:
        fp.write(text + '\n')

    if verbose:
        print(f'Wrote {json_filename}')

    return text


def frame_to_csv(frame, csv_filename, verbose=False):
    """ Write a ``pandas.DataFrame`` curve with 17 significant digits. """

    frame.to_csv(csv_filename, index=False, float_format='%.17g')

    if verbose:
        print(f'Wrote {csv_filename} ({len(frame)} rows)')


def records_to_frame(records, columns):
    return pd.DataFrame.from_records(records, columns=columns)


def parse_grid(grid_spec):
    """ Parse a grid specification string into a sorted float array.

    Accepted forms are a comma-separated list (``"1,10,100"``),
    ``"lin:start:stop:num"`` and ``"geom:start:stop:num"``.

    Args:
        grid_spec (str, list):
            Grid string; a list of numbers is passed through.

    Returns:
        numpy.ndarray:
            Grid values in increasing order.

    """

    if isinstance(grid_spec, (list, tuple, np.ndarray)):
        values = np.asarray(grid_spec, dtype=float)

    else:
        text = str(grid_spec).strip()
        parts = text.split(':')

        try:
            if parts[0] in ('lin', 'geom'):
                if len(parts) != 4:
                    raise DomainError(f'Grid "{text}" must read {parts[0]}:start:stop:num')
                start, stop, num = float(parts[1]), float(parts[2]), int(parts[3])
                if num < 1:
                    raise DomainError(f'Grid "{text}" needs at least one point')
                if parts[0] == 'lin':
                    values = np.linspace(start, stop, num)
                else:
                    if start <= 0 or stop <= 0:
                        raise DomainError(f'Geometric grid "{text}" needs positive end points')
                    values = np.geomspace(start, stop, num)
            else:
                values = np.array([float(v) for v in text.split(',') if v.strip()])

        except ValueError as err:
            if isinstance(err, DomainError):
                raise
            raise DomainError(f'Could not parse grid "{text}": {err}') from err

    if values.size == 0 or not np.all(np.isfinite(values)):
        raise DomainError(f'Grid {grid_spec!r} is empty or not finite')

    return np.sort(values)


SCHEMA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'schemas')


def _inline_refs(node, loaded):
    if isinstance(node, dict):
        if set(node) == {'$ref'}:
            return loaded(node['$ref'])
        return {k: _inline_refs(v, loaded) for k, v in node.items()}
    if isinstance(node, list):
        return [_inline_refs(v, loaded) for v in node]
    return node


def load_schema(name):
    """ Load one of the shipped JSON schemas with its file references inlined.

    Args:
        name (str):
            File name such as ``"analytic.schema.json"``, or just ``"analytic"``.

    Returns:
        dict

    """

    if not name.endswith('.schema.json'):
        name = f'{name}.schema.json'

    def loaded(filename):
        with open(os.path.join(SCHEMA_DIR, filename)) as fp:
            return _inline_refs(json.load(fp), loaded)

    return loaded(name)
