PATH_SEQUENCE = "n=4\n+ 1 2\n+ 0 1\n+ 2 3\n"


def test_index_lists_endpoints(client):
    response = client.get('/')
    assert response.status_code == 200
    assert '/api/run' in response.get_json()['endpoints']


def test_health(client):
    response = client.get('/api/health')
    assert response.status_code == 200
    assert response.get_json() == {'success': True, 'status': 'ok'}


def test_generate_named_pattern(client):
    response = client.post('/api/generate', json={'pattern': 'path-zipper', 'n': 4, 'rounds': 0})
    data = response.get_json()
    assert response.status_code == 200
    assert data['success']
    assert data['updates'] == 3
    assert data['sequence'].endswith(PATH_SEQUENCE.split('\n', 1)[1])


def test_generate_random_defaults_to_ten_n(client):
    data = client.post('/api/generate', json={'n': 6, 'seed': 2}).get_json()
    assert data['updates'] == 60


def test_generate_requires_n(client):
    response = client.post('/api/generate', json={'pattern': 'random'})
    assert response.status_code == 400
    assert response.get_json()['success'] is False


def test_generate_rejects_non_integer(client):
    response = client.post('/api/generate', json={'n': 'many'})
    assert response.status_code == 400


def test_run_sequence(client):
    response = client.post('/api/run', json={'sequence': PATH_SEQUENCE, 'seed': 1})
    data = response.get_json()
    assert response.status_code == 200
    assert data['success']
    assert data['violations'] == []
    assert data['result']['matching_size'] == 2
    assert data['stats']['totals']['updates'] == 3
    assert data['stats']['config'] == {'n': 4, 'threshold': 2, 'seed': 1}


def test_run_with_teardown(client):
    data = client.post('/api/run', json={'sequence': PATH_SEQUENCE, 'teardown': True}).get_json()
    assert data['stats']['totals']['final_edge_count'] == 0


def test_verify_reports_ratio(client):
    data = client.post('/api/verify', json={'sequence': PATH_SEQUENCE}).get_json()
    assert data['success']
    assert data['result']['ratio']['status'] == 'ok'
    assert data['result']['ratio']['maximum_matching'] == 2


def test_unreplayable_sequence_is_bad_request(client):
    response = client.post('/api/verify', json={'sequence': "n=4\n- 0 1\n"})
    assert response.status_code == 400
    assert 'line 2' in response.get_json()['error']


def test_missing_sequence(client):
    response = client.post('/api/run', json={})
    assert response.status_code == 400


def test_sequence_size_limit(app, client):
    app.config['API_MAX_UPDATES'] = 2
    response = client.post('/api/run', json={'sequence': PATH_SEQUENCE})
    assert response.status_code == 400
    assert 'limit' in response.get_json()['error']


def test_bad_threshold_is_bad_request(client):
    response = client.post('/api/run', json={'sequence': PATH_SEQUENCE, 'threshold': 0})
    assert response.status_code == 400
