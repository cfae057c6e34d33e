import json

import pytest
import yaml
from click.testing import CliRunner

from polarize.cli import cli
from polarize.cli.report import EXIT_FAILED, EXIT_PASSED, EXIT_USAGE
from polarize.csb import configuration as csb_configuration
from polarize.reproduction import EXAMPLE_X, EXAMPLE_Y

SUP = '{"kind": "pnorm", "p": "inf", "dim": 2}'
E1 = '[[1, 0], [0, 0]]'
E2 = '[[0, 0], [1, 0]]'


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def invoke(runner, tmp_path):
    """Runs a command and returns the click result and the parsed report file."""

    def run(*args):
        output = tmp_path / 'report.json'
        if output.exists():
            output.unlink()
        result = runner.invoke(cli, [*args, '--output', str(output)])
        report = None
        if output.exists():
            with output.open('r', encoding='utf-8') as handle:
                report = json.load(handle)
        return result, report

    return run


def vector_text(vector) -> str:
    return json.dumps([list(pair) for pair in vector.root])


def test_product_of_orthogonal_basis_vectors(invoke):
    result, report = invoke('product', '--norm', SUP, '--x', E1, '--y', E2)
    assert result.exit_code == EXIT_PASSED, result.output
    assert report['command'] == 'product'
    assert report['exit_status'] == EXIT_PASSED
    assert report['results'][0]['value'] == [0.0, 0.0]
    assert report['results'][0]['csb_ratio'] == 0.0
    assert report['checks'][0]['name'] == 'csb_ratio'


def test_product_of_the_example_vectors(invoke):
    result, report = invoke(
        'product',
        '--norm',
        SUP,
        '--x',
        vector_text(EXAMPLE_X),
        '--y',
        vector_text(EXAMPLE_Y),
    )
    assert result.exit_code == EXIT_PASSED, result.output
    value = report['results'][0]['value']
    assert value == pytest.approx([0.58327, 0.18608], abs=1e-5)
    assert report['results'][0]['csb_ratio'] == pytest.approx(0.6122, abs=1e-4)


def test_product_reads_descriptor_files(invoke, norm_path):
    result, report = invoke(
        'product', '--norm', str(norm_path('hermitian_c2')), '--x', E1, '--y', E1
    )
    assert result.exit_code == EXIT_PASSED, result.output
    assert report['results'][0]['value'] == pytest.approx([2.0, 0.0])


@pytest.mark.parametrize(
    'args',
    [
        pytest.param(['--norm', '{"kind": "pnorm"', '--x', E1, '--y', E2], id='json'),
        pytest.param(
            ['--norm', '{"kind": "pnorm", "p": 0.5}', '--x', E1, '--y', E2],
            id='descriptor',
        ),
        pytest.param(
            ['--norm', SUP, '--x', E1, '--y', '[[1, 0], [0, 0], [0, 0]]'],
            id='dimension',
        ),
        pytest.param(
            ['--norm', SUP, '--x', E1, '--y', E2, '--tol', 'csb.tie_tol'],
            id='tolerance',
        ),
        pytest.param(
            ['--norm', SUP, '--x', E1, '--y', E2, '--tol', 'optics.gain=1'],
            id='section',
        ),
    ],
)
def test_usage_errors_exit_with_two(invoke, args):
    result, report = invoke('product', *args)
    assert result.exit_code == EXIT_USAGE
    assert report is None


def test_failed_checks_exit_with_one(invoke):
    result, report = invoke(
        'product',
        '--norm',
        SUP,
        '--x',
        vector_text(EXAMPLE_X),
        '--y',
        vector_text(EXAMPLE_Y),
        '--tol',
        'general.csb_tol=-1',
    )
    assert result.exit_code == EXIT_FAILED
    assert report['exit_status'] == EXIT_FAILED
    assert report['checks'][0]['passed'] is False


def test_tolerance_overrides_are_recorded_and_restored(invoke):
    result, report = invoke(
        'verify-csb', '--norm', SUP, '--tol', 'csb.final_bound_tol=1e-6'
    )
    assert result.exit_code == EXIT_PASSED, result.output
    assert report['inputs']['tolerances'] == {'csb.final_bound_tol': 1e-6}
    assert csb_configuration.final_bound_tol == 1e-7


def test_verify_csb_on_one_norm(invoke, norm_path):
    result, report = invoke('verify-csb', '--norm', str(norm_path('l1_c2')))
    assert result.exit_code == EXIT_PASSED, result.output
    trace = report['results'][0]['trace']
    assert trace['case'] == 'a'
    assert trace['passed'] is True
    assert report['summary'] == {'traces': 1, 'passed': 1, 'failed': 0}


def test_verify_csb_on_a_family(invoke):
    result, report = invoke(
        'verify-csb', '--family', 'dual_max', '--trials', '5', '--seed', '42'
    )
    assert result.exit_code == EXIT_PASSED, result.output
    assert report['summary']['passed'] == 5
    assert report['inputs'] == {'family': 'dual_max', 'trials': 5, 'seed': 42}
    seeds = [entry['seed'] for entry in report['results']]
    assert len(set(seeds)) == 5


def test_verify_csb_needs_a_norm(runner):
    result = runner.invoke(cli, ['verify-csb'])
    assert result.exit_code == EXIT_USAGE


def test_verify_csb_rejects_other_dimensions(invoke):
    norm = '{"kind": "pnorm", "p": 2, "dim": 3}'
    result, _ = invoke('verify-csb', '--norm', norm)
    assert result.exit_code == EXIT_USAGE


def test_reproduce_paper(invoke):
    result, report = invoke('reproduce-paper', '--pretty')
    assert result.exit_code == EXIT_PASSED, result.output
    assert report['summary']['modulus_gap'] >= 0.02
    assert all(row['passed'] for row in report['checks'])


def test_stress(invoke):
    result, report = invoke(
        'stress',
        '--family',
        'pnorm',
        '--trials',
        '2',
        '--restarts',
        '2',
        '--iters',
        '30',
    )
    assert result.exit_code == EXIT_PASSED, result.output
    assert report['summary']['max_ratio'] <= 1 + 1e-7
    assert len(report['results']) == 2


def test_stress_over_all_families(invoke):
    result, report = invoke(
        'stress', '--family', 'all', '--trials', '7', '--restarts', '1', '--iters', '5'
    )
    assert result.exit_code == EXIT_PASSED, result.output
    kinds = {entry['norm']['kind'] for entry in report['results']}
    assert len(kinds) == 7


def test_explore_conjecture_never_fails(invoke):
    result, report = invoke(
        'explore-conjecture',
        '--family',
        'hermitian',
        '--trials',
        '2',
        '--restarts',
        '2',
        '--iters',
        '30',
    )
    assert result.exit_code == EXIT_PASSED, result.output
    assert report['checks'] == []
    assert report['summary'] == {'entries': 2, 'flags': 0}


def test_deterministic_reports_are_identical(runner, tmp_path):
    paths = [tmp_path / 'first.json', tmp_path / 'second.json']
    for path in paths:
        result = runner.invoke(
            cli,
            [
                'verify-csb',
                '--family',
                'mixture',
                '--trials',
                '3',
                '--deterministic',
                '--output',
                str(path),
            ],
        )
        assert result.exit_code == EXIT_PASSED, result.output
    first, second = (path.read_text(encoding='utf-8') for path in paths)
    assert first == second
    assert json.loads(first)['timestamp'] is None


def test_existing_report_is_not_overwritten(runner, tmp_path):
    output = tmp_path / 'report.json'
    output.write_text('{"other": 1}', encoding='utf-8')
    args = ['product', '--norm', SUP, '--x', E1, '--y', E2, '--output', str(output)]
    result = runner.invoke(cli, args)
    assert result.exit_code == EXIT_USAGE
    assert json.loads(output.read_text(encoding='utf-8')) == {'other': 1}
    result = runner.invoke(cli, [*args, '--overwrite'])
    assert result.exit_code == EXIT_PASSED
    assert json.loads(output.read_text(encoding='utf-8'))['command'] == 'product'


def test_yaml_reports(runner, tmp_path):
    output = tmp_path / 'report.yaml'
    result = runner.invoke(
        cli, ['reproduce-paper', '--deterministic', '--output', str(output)]
    )
    assert result.exit_code == EXIT_PASSED, result.output
    with output.open('r', encoding='utf-8') as handle:
        report = yaml.safe_load(handle)
    assert report['command'] == 'reproduce-paper'
    assert report['timestamp'] is None
