"""
HTTP APIのテスト
"""

import pytest

GHZ2_DSL = 'qubits 2\nh q0\ncx q0 q1\n'


def test_health(client):
    response = client.get('/health')
    assert response.status_code == 200
    data = response.get_json()
    assert data['status'] == 'healthy'
    assert data['checks']['managers']['missing'] == []
    assert data['limits']['max_qubits'] == 25


def test_health_degraded(app):
    app.config['EXPERIMENT_MANAGERS'] = {}
    response = app.test_client().get('/health')
    assert response.status_code == 503
    assert response.get_json()['status'] == 'degraded'


class TestCircuitRoutes:
    def test_parse(self, client):
        response = client.post('/api/circuits/parse', json={'text': 'qubits 2\n# bell\nh   q0\ncx q0 q1'})
        assert response.status_code == 200
        data = response.get_json()['data']
        assert data['canonical'] == GHZ2_DSL
        assert data['gate_count'] == 2

    def test_parse_error_has_location(self, client):
        response = client.post('/api/circuits/parse', json={'text': 'qubits 2\nh q0\nswap q0 q1\n'})
        assert response.status_code == 400
        body = response.get_json()
        assert body['success'] is False
        assert body['line'] == 3
        assert body['column'] == 1

    def test_missing_body(self, client):
        response = client.post('/api/circuits/parse', data='not json')
        assert response.status_code == 400

    def test_lower(self, client):
        response = client.post('/api/circuits/lower', json={'text': GHZ2_DSL, 'Q': 2, 'S': [1]})
        assert response.status_code == 200
        data = response.get_json()['data']
        assert data['n_qubits'] == 4
        assert data['gate_count'] == 5
        assert data['cx_count'] == 3
        assert data['code']['S'] == [1]

    def test_ghz(self, client):
        response = client.get('/api/circuits/ghz?n=2&q=2')
        assert response.status_code == 200
        data = response.get_json()['data']
        assert data['n_qubits'] == 4
        assert sorted(data['ideal_pdf'].values()) == [0.5, 0.5]

    @pytest.mark.parametrize('query', ['n=6&q=5', 'n=1&q=2', 'q=2'])
    def test_ghz_rejected(self, client, query):
        response = client.get(f'/api/circuits/ghz?{query}')
        assert response.status_code == 400


class TestExperimentRoutes:
    def test_run(self, client):
        response = client.post('/api/experiments/run', json={'N': 2, 'Q': '1-2', 'shots': 128, 'reps': 2})
        assert response.status_code == 200
        data = response.get_json()['data']
        assert len(data['rows']) == 4
        assert all(a['mu_full'] == 100.0 for a in data['aggregates'])
        assert data['config']['sample_noiseless'] is False

    @pytest.mark.parametrize('path', ['/api/experiments/run', '/api/experiments/inject'])
    def test_non_json_body(self, client, path):
        """JSONオブジェクト以外のボディは400になる"""
        for kwargs in ({'data': 'not json'}, {'json': [1, 2]}):
            response = client.post(path, **kwargs)
            assert response.status_code == 400
            assert response.get_json()['success'] is False

    def test_run_oversized(self, client):
        response = client.post('/api/experiments/run', json={'N': 6, 'Q': 5, 'reps': 1})
        assert response.status_code == 400

    def test_inject(self, client):
        response = client.post('/api/experiments/inject', json={'N': 2, 'Q': 2, 'error': 'X'})
        assert response.status_code == 200
        assert response.get_json()['data']['min_rejection'] == pytest.approx(1.0, abs=1e-12)

    def test_inject_invalid_error(self, client):
        response = client.post('/api/experiments/inject', json={'error': 'CUSTOM'})
        assert response.status_code == 400

    def test_verify_quick(self, client):
        response = client.get('/api/experiments/verify?quick=true')
        assert response.status_code == 200
        data = response.get_json()['data']
        assert data['passed'] is True
        assert {c['name'] for c in data['checks']} >= {'identities', 'logical_u3', 'logical_cx'}


def test_wsgi_fallback_reports_error():
    from wsgi import build_fallback_app
    response = build_fallback_app(RuntimeError('boom')).test_client().get('/health')
    assert response.status_code == 503
    assert response.get_json()['message'] == 'boom'
